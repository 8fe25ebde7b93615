/* C-linkage shims for Fortran module 'algorithm'; generated by bindforge. */

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>


#include <algorithm>


template<class T>
void sort(T *ptr, size_t size) {
  std::sort(ptr, ptr + size);
}

#ifndef SWIGEXPORT
#define SWIGEXPORT extern "C"
#endif

enum {
  SWIG_MEM_OWN = 0x01,
  SWIG_MEM_RVALUE = 0x02,
  SWIG_MEM_CONST = 0x04
};

struct SwigArrayWrapper {
  void *data;
  size_t size;
};

static inline SwigArrayWrapper swigbf_copy_array(const void *data, size_t count, size_t elem) {
  SwigArrayWrapper result;
  result.data = 0;
  result.size = 0;
  if (count > 0) {
    result.data = std::malloc(count * elem);
    if (!result.data) {
      throw std::bad_alloc();
    }
    std::memcpy(result.data, data, count * elem);
    result.size = count;
  }
  return result;
}

SWIGEXPORT void _wrap_algorithm_sort__SWIG_0(SwigArrayWrapper *farg1) {
  sort<int>(static_cast<int *>(farg1->data), farg1->size);
}

SWIGEXPORT void _wrap_algorithm_sort__SWIG_1(SwigArrayWrapper *farg1) {
  sort<double>(static_cast<double *>(farg1->data), farg1->size);
}
