/* C-linkage shims for Fortran module 'mixed'; generated by bindforge. */

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <cstring>


void overloaded() {}
int overloaded(int x) { return x; }
int fine(int x) { return 2 * x; }

#ifndef SWIGEXPORT
#define SWIGEXPORT extern "C"
#endif

enum {
  SWIG_MEM_OWN = 0x01,
  SWIG_MEM_RVALUE = 0x02,
  SWIG_MEM_CONST = 0x04
};

SWIGEXPORT int _wrap_mixed_fine(int farg1) {
  int fresult = {};
  fresult = fine(farg1);
  return fresult;
}
