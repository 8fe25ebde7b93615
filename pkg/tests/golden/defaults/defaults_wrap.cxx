/* C-linkage shims for Fortran module 'defaults'; generated by bindforge. */

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <exception>


#include "defaults.hpp"

#ifndef SWIGEXPORT
#define SWIGEXPORT extern "C"
#endif

enum {
  SWIG_MEM_OWN = 0x01,
  SWIG_MEM_RVALUE = 0x02,
  SWIG_MEM_CONST = 0x04
};

struct SwigClassWrapper {
  void *cptr;
  int cmemflags;
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

static inline SwigArrayWrapper swigbf_copy_string(const char *data, size_t size) {
  return swigbf_copy_array(data, size, 1);
}

static inline SwigArrayWrapper swigbf_copy_cstring(const char *str) {
  return swigbf_copy_array(str, str ? std::strlen(str) : 0, 1);
}

SWIGEXPORT int _wrap_defaults_ierr;
int _wrap_defaults_ierr = 0;
static std::string swigbf_error_message;

static inline void swigbf_store_error(int code, const char *message) {
  if (_wrap_defaults_ierr == 0) {
    _wrap_defaults_ierr = code;
    swigbf_error_message = message ? message : "";
  }
}

static inline void swigbf_fail(const char *func, const char *what, const char *type) {
  swigbf_store_error(1, (std::string(func) + ": " + what + " '" + type + "'").c_str());
}

SWIGEXPORT SwigArrayWrapper _wrap_defaults_get_serr() {
  return swigbf_copy_string(swigbf_error_message.data(), swigbf_error_message.size());
}

static inline int swigbf_check_handle(const SwigClassWrapper *handle, int nonnull, int needs_mutable,
                               const char *func, const char *type) {
  if (nonnull && !handle->cptr) {
    swigbf_fail(func, "received a null handle for", type);
    return 1;
  }
  if (needs_mutable && (handle->cmemflags & SWIG_MEM_CONST)) {
    swigbf_fail(func, "cannot modify a const handle of", type);
    return 1;
  }
  return 0;
}

SWIGEXPORT void _wrap_defaults_free(void *ptr) {
  std::free(ptr);
}

SWIGEXPORT double _wrap_defaults_scale__SWIG_0(double farg1) {
  double fresult = {};
  try {
    fresult = scale(farg1);
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT double _wrap_defaults_scale__SWIG_1(double farg1, double farg2) {
  double fresult = {};
  try {
    fresult = scale(farg1, farg2);
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT double _wrap_defaults_scale__SWIG_2(double farg1, double farg2, double farg3) {
  double fresult = {};
  try {
    fresult = scale(farg1, farg2, farg3);
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT int _wrap_defaults_mode_code(int farg1) {
  int fresult = {};
  try {
    fresult = mode_code(static_cast<Mode>(farg1));
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT int _wrap_defaults_default_mode() {
  int fresult = {};
  try {
    fresult = static_cast<int>(default_mode());
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT SwigClassWrapper _wrap_defaults_Counter_new__SWIG_0() {
  SwigClassWrapper fresult = {};
  try {
    fresult.cptr = static_cast<void *>(static_cast<Counter *>(new Counter()));
    fresult.cmemflags = SWIG_MEM_OWN | SWIG_MEM_RVALUE;
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT SwigClassWrapper _wrap_defaults_Counter_new__SWIG_1(int farg1) {
  SwigClassWrapper fresult = {};
  try {
    fresult.cptr = static_cast<void *>(static_cast<Counter *>(new Counter(farg1)));
    fresult.cmemflags = SWIG_MEM_OWN | SWIG_MEM_RVALUE;
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT int _wrap_defaults_Counter_instances() {
  int fresult = {};
  try {
    fresult = Counter::instances();
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT int _wrap_defaults_Counter_next(SwigClassWrapper *farg1) {
  int fresult = {};
  try {
    if (swigbf_check_handle(farg1, 1, 1, "Counter::next", "Counter")) return fresult;
    Counter *arg1 = static_cast<Counter *>(farg1->cptr);
    fresult = (arg1)->next();
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT int _wrap_defaults_Counter_peek(SwigClassWrapper *farg1) {
  int fresult = {};
  try {
    if (swigbf_check_handle(farg1, 1, 0, "Counter::peek", "const Counter")) return fresult;
    const Counter *arg1 = static_cast<const Counter *>(farg1->cptr);
    fresult = (arg1)->peek();
  } catch (const std::exception &e) {
    swigbf_store_error(1, e.what());
    return fresult;
  } catch (...) {
    swigbf_store_error(-1, "an unknown C++ exception was thrown");
    return fresult;
  }
  return fresult;
}

SWIGEXPORT void _wrap_defaults_Counter_delete(SwigClassWrapper *farg1) {
  Counter *arg1 = static_cast<Counter *>(farg1->cptr);
  delete arg1;
}
