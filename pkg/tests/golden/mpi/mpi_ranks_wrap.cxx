/* C-linkage shims for Fortran module 'mpi_ranks'; generated by bindforge. */

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mpi.h>


#include <mpi.h>


int rank_of(MPI_Comm comm) {
  int rank = -1;
  MPI_Comm_rank(comm, &rank);
  return rank;
}

#ifndef SWIGEXPORT
#define SWIGEXPORT extern "C"
#endif

enum {
  SWIG_MEM_OWN = 0x01,
  SWIG_MEM_RVALUE = 0x02,
  SWIG_MEM_CONST = 0x04
};

SWIGEXPORT int _wrap_mpi_ranks_rank_of(int farg1) {
  int fresult = {};
  fresult = rank_of(MPI_Comm_f2c(static_cast<MPI_Fint>(farg1)));
  return fresult;
}
