#include "polymerlab/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace polymer {

namespace {

// FFTW planning mutates global state; execution does not. Plans are created
// once per (size, sign) with FFTW_UNALIGNED so they run on any buffer.
class PlanCache {
  public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch(n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(std::vector<std::complex<double>>& a, int sign) {
    if (a.empty()) return;
    fftw_plan p = cache().get(a.size(), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(p, buf, buf);
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& a) { execute(a, FFTW_FORWARD); }
void fft_inverse(std::vector<std::complex<double>>& a) { execute(a, FFTW_BACKWARD); }

}  // namespace polymer
