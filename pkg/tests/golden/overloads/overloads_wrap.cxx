/* C-linkage shims for Fortran module 'overloads'; generated by bindforge. */

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <cstring>


void myfunc(int x) { (void)x; }
void myfunc(double x) { (void)x; }

#ifndef SWIGEXPORT
#define SWIGEXPORT extern "C"
#endif

enum {
  SWIG_MEM_OWN = 0x01,
  SWIG_MEM_RVALUE = 0x02,
  SWIG_MEM_CONST = 0x04
};

SWIGEXPORT void _wrap_overloads_myfunc__SWIG_0(int farg1) {
  myfunc(farg1);
}

SWIGEXPORT void _wrap_overloads_myfunc__SWIG_1(double farg1) {
  myfunc(farg1);
}
