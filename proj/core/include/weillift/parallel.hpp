#ifndef WEILLIFT_PARALLEL_HPP
#define WEILLIFT_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "weillift/real.hpp"

namespace weillift {

inline unsigned& worker_count() {
  static unsigned n = std::thread::hardware_concurrency();
  return n;
}
inline void set_worker_count(unsigned n) { worker_count() = n ? n : 1; }

// Static block split of [0,n).  Bodies must write only to their own slots so
// results are independent of the thread count.  The first worker exception
// is rethrown on the calling thread.
template <typename F>
void parallel_for(size_t n, F&& body, size_t grain = 1) {
  unsigned nt = worker_count();
  if (nt <= 1 || n <= grain) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (nt > n) nt = static_cast<unsigned>(n);
  mpfr_prec_t prec = default_prec();
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::exception_ptr first_error;
  std::mutex err_mu;
  size_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    size_t lo = t * chunk, hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([&body, &first_error, &err_mu, lo, hi, prec] {
      set_default_prec(prec);
      try {
        for (size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace weillift

#endif
