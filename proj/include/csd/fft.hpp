#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

namespace csd {

using cd = std::complex<double>;

namespace detail {

// Cached FFTW plans, one forward/backward pair per grid size. FFTW_ESTIMATE
// keeps planning deterministic across runs; FFTW_UNALIGNED lets the plans run
// on any std::vector storage via the new-array execute interface. The planner
// itself is not thread-safe, hence the mutex; execution on distinct arrays is.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(int n, int sign) {
        std::scoped_lock lk(mu_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cd> dummy(static_cast<size_t>(n) * n);
        fftw_plan p = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(dummy.data()),
                                       reinterpret_cast<fftw_complex*>(dummy.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

  private:
    PlanCache() = default;
    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace detail

// Forward DFT, physical -> frequency. Carries the 1/n^2 factor so that the
// output entries are Fourier coefficients: e^{i x . xi0} maps to a unit
// coefficient at xi0.
inline void fft_forward(int n, const std::vector<cd>& in, std::vector<cd>& out) {
    out.resize(in.size());
    fftw_plan p = detail::PlanCache::instance().get(n, FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (auto& v : out) v *= scale;
}

// Inverse DFT, frequency -> physical (plain synthesis, no scaling).
inline void fft_inverse(int n, const std::vector<cd>& in, std::vector<cd>& out) {
    out.resize(in.size());
    fftw_plan p = detail::PlanCache::instance().get(n, FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace csd
