/* C-linkage shims for Fortran module 'unsupported'; generated by bindforge. */

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <cstring>


#include <memory>
struct Widget {
  int value;
};
int plain(int x) { return x; }
int variadic(int n, ...) { return n; }
std::shared_ptr<Widget> make_widget() { return std::make_shared<Widget>(); }
Widget **handles() { return nullptr; }
template<class T> T unused_template(T v) { return v; }
class Left {
public:
  Left() {}
};

class Right {
public:
  Right() {}
};

class Both : public Left, public Right {
public:
  Both() {}
  int value() const { return 1; }
};

struct Vec2 {
  double x;
  double y;
  Vec2 operator+(const Vec2 &other) const { return Vec2{x + other.x, y + other.y}; }
};

long double precise(long double x) { return x; }

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

static inline void swigbf_fail(const char *func, const char *what, const char *type) {
  std::fprintf(stderr, "%s: %s '%s'\n", func, what, type);
  std::abort();
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

SWIGEXPORT int _wrap_unsupported_Widget_get_value(SwigClassWrapper *farg1) {
  int fresult = {};
  if (swigbf_check_handle(farg1, 1, 0, "Widget::value", "const Widget")) return fresult;
  const Widget *arg1 = static_cast<const Widget *>(farg1->cptr);
  fresult = (arg1)->value;
  return fresult;
}

SWIGEXPORT void _wrap_unsupported_Widget_set_value(SwigClassWrapper *farg1, int farg2) {
  if (swigbf_check_handle(farg1, 1, 1, "Widget::value", "Widget")) return;
  Widget *arg1 = static_cast<Widget *>(farg1->cptr);
  (arg1)->value = farg2;
}

SWIGEXPORT void _wrap_unsupported_Widget_delete(SwigClassWrapper *farg1) {
  Widget *arg1 = static_cast<Widget *>(farg1->cptr);
  delete arg1;
}

SWIGEXPORT int _wrap_unsupported_plain(int farg1) {
  int fresult = {};
  fresult = plain(farg1);
  return fresult;
}

SWIGEXPORT SwigClassWrapper _wrap_unsupported_Left_new__SWIG_0() {
  SwigClassWrapper fresult = {};
  fresult.cptr = static_cast<void *>(static_cast<Left *>(new Left()));
  fresult.cmemflags = SWIG_MEM_OWN | SWIG_MEM_RVALUE;
  return fresult;
}

SWIGEXPORT void _wrap_unsupported_Left_delete(SwigClassWrapper *farg1) {
  Left *arg1 = static_cast<Left *>(farg1->cptr);
  delete arg1;
}

SWIGEXPORT SwigClassWrapper _wrap_unsupported_Right_new__SWIG_0() {
  SwigClassWrapper fresult = {};
  fresult.cptr = static_cast<void *>(static_cast<Right *>(new Right()));
  fresult.cmemflags = SWIG_MEM_OWN | SWIG_MEM_RVALUE;
  return fresult;
}

SWIGEXPORT void _wrap_unsupported_Right_delete(SwigClassWrapper *farg1) {
  Right *arg1 = static_cast<Right *>(farg1->cptr);
  delete arg1;
}

SWIGEXPORT double _wrap_unsupported_Vec2_get_x(SwigClassWrapper *farg1) {
  double fresult = {};
  if (swigbf_check_handle(farg1, 1, 0, "Vec2::x", "const Vec2")) return fresult;
  const Vec2 *arg1 = static_cast<const Vec2 *>(farg1->cptr);
  fresult = (arg1)->x;
  return fresult;
}

SWIGEXPORT void _wrap_unsupported_Vec2_set_x(SwigClassWrapper *farg1, double farg2) {
  if (swigbf_check_handle(farg1, 1, 1, "Vec2::x", "Vec2")) return;
  Vec2 *arg1 = static_cast<Vec2 *>(farg1->cptr);
  (arg1)->x = farg2;
}

SWIGEXPORT double _wrap_unsupported_Vec2_get_y(SwigClassWrapper *farg1) {
  double fresult = {};
  if (swigbf_check_handle(farg1, 1, 0, "Vec2::y", "const Vec2")) return fresult;
  const Vec2 *arg1 = static_cast<const Vec2 *>(farg1->cptr);
  fresult = (arg1)->y;
  return fresult;
}

SWIGEXPORT void _wrap_unsupported_Vec2_set_y(SwigClassWrapper *farg1, double farg2) {
  if (swigbf_check_handle(farg1, 1, 1, "Vec2::y", "Vec2")) return;
  Vec2 *arg1 = static_cast<Vec2 *>(farg1->cptr);
  (arg1)->y = farg2;
}

SWIGEXPORT void _wrap_unsupported_Vec2_delete(SwigClassWrapper *farg1) {
  Vec2 *arg1 = static_cast<Vec2 *>(farg1->cptr);
  delete arg1;
}
