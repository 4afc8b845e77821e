#pragma once

#include <exception>
#include <mutex>

#include <omp.h>

#include "ddrom/types.hpp"

namespace ddrom
{

// Runs body(i) for i in [0, n). In parallel mode the first exception thrown by any
// iteration is rethrown on the calling thread after the loop drains.
template <typename Body>
void for_each_index(Index n, Execution exec, Body &&body)
{
  if (exec == Execution::Serial || n < 2 || omp_in_parallel())
  {
    for (Index i = 0; i < n; i++)
    {
      body(i);
    }
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
  for (Index i = 0; i < n; i++)
  {
    try
    {
      body(i);
    }
    catch (...)
    {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure)
      {
        failure = std::current_exception();
      }
    }
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

inline int max_threads() { return omp_get_max_threads(); }

}  // namespace ddrom
