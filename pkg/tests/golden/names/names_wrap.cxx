/* C-linkage shims for Fortran module 'names'; generated by bindforge. */

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <cstring>


int select(int end, int type) { return end + type; }
double a_function_name_that_is_far_too_long_for_fortran_identifiers_to_hold(double x) { return x; }
double a_function_name_that_is_far_too_long_for_fortran_identifiers_to_hold(int x) { return x; }
int _leading_underscore(int result) { return result; }

#ifndef SWIGEXPORT
#define SWIGEXPORT extern "C"
#endif

enum {
  SWIG_MEM_OWN = 0x01,
  SWIG_MEM_RVALUE = 0x02,
  SWIG_MEM_CONST = 0x04
};

SWIGEXPORT int _wrap_names_select_(int farg1, int farg2) {
  int fresult = {};
  fresult = select(farg1, farg2);
  return fresult;
}

SWIGEXPORT double _wrap_names_a_function_name_that_is_far_too_long_for_fortran_identi_59255b6__SWIG_0(double farg1) {
  double fresult = {};
  fresult = a_function_name_that_is_far_too_long_for_fortran_identifiers_to_hold(farg1);
  return fresult;
}

SWIGEXPORT double _wrap_names_a_function_name_that_is_far_too_long_for_fortran_identi_59255b6__SWIG_1(int farg1) {
  double fresult = {};
  fresult = a_function_name_that_is_far_too_long_for_fortran_identifiers_to_hold(farg1);
  return fresult;
}

SWIGEXPORT int _wrap_names_f_leading_underscore(int farg1) {
  int fresult = {};
  fresult = _leading_underscore(farg1);
  return fresult;
}
