#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "fractrace/errors.hpp"

namespace fractrace::detail {

namespace {

// The FFTW planner is not re-entrant; plan execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanCache {
  std::map<std::pair<std::vector<std::size_t>, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

fftw_plan get_plan(const std::vector<std::size_t>& sizes, int sign, fftw_complex* buf) {
  static PlanCache cache;
  std::lock_guard lock(planner_mutex());
  auto key = std::make_pair(sizes, sign);
  if (auto it = cache.plans.find(key); it != cache.plans.end()) return it->second;
  std::vector<int> dims(sizes.begin(), sizes.end());
  fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw NumericalError("fftw_plan_dft failed");
  cache.plans.emplace(std::move(key), plan);
  return plan;
}

}  // namespace

void dft_inplace(std::vector<std::complex<double>>& data,
                 const std::vector<std::size_t>& sizes, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = get_plan(sizes, sign, buf);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace fractrace::detail
