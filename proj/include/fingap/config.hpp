// Numerical knobs shared across the library, and a small deterministic
// parallel map used for independent integrations.
#pragma once

#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fingap {

struct Config {
  // frame integration
  int n_steps = 2048;
  double lambda_stencil_h = 1e-3;  // scaled by (1+|lambda|) at use sites

  // spectral root search
  double root_window_scale = 1.0;  // window half-width = scale * pi/T
  double root_rescue_im = 2.5;     // imaginary half-height of the rescue sweep
  int winding_samples = 128;

  // order detection at lambda_*
  double contour_radius = 1e-2;
  int contour_nodes = 64;
  int taylor_terms = 8;
  double ord_rel_tol = 1e-6;
  double nilpotent_tol = 1e-6;

  // closing / pipeline
  double closure_tol = 1e-6;
  int dress_modes = 32;
  double newton_tol = 1e-10;
  int max_iter = 40;
  int K_margin = 8;
  int N_fixed = 0;
  // "nearest": target sign of Delta(lambda_*) is the admissible value +-2
  // closest to the input's.
  bool sign_nearest = true;
  // kept for a policy override; see finite_gap_approximate
  bool degenerate_skip_undress = true;

  int threads = 1;
};

// Deterministic parallel map: out[i] = fn(i). Results depend only on the
// index, never on scheduling.
template <typename R>
std::vector<R> parallel_map(int n, int threads, const std::function<R(int)>& fn) {
  std::vector<R> out(static_cast<std::size_t>(n));
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error;
  std::mutex err_mtx;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < n; i += workers) out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mtx);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace fingap
