#include "ltir/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ltir::fft {

namespace {

// FFTW's planner is not thread-safe; plans are cached per (size, direction)
// behind a mutex and executed on caller-owned fftw_malloc'd buffers.
class PlanCache {
public:
    fftw_plan get(int n, int sign) {
        std::scoped_lock lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        fftw_complex* in = fftw_alloc_complex(static_cast<size_t>(n));
        fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& x,
                                            int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return {};
    fftw_plan plan = cache().get(n, sign);
    fftw_complex* in = fftw_alloc_complex(x.size());
    fftw_complex* out = fftw_alloc_complex(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        in[i][0] = x[i].real();
        in[i][1] = x[i].imag();
    }
    fftw_execute_dft(plan, in, out);
    std::vector<std::complex<double>> result(x.size());
    for (size_t i = 0; i < x.size(); ++i) result[i] = {out[i][0], out[i][1]};
    fftw_free(in);
    fftw_free(out);
    return result;
}

} // namespace

std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& x) {
    return transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& x) {
    auto result = transform(x, FFTW_BACKWARD);
    const double scale = result.empty() ? 1.0 : 1.0 / static_cast<double>(result.size());
    for (auto& value : result) value *= scale;
    return result;
}

std::vector<std::complex<double>> forward_real(const std::vector<double>& x) {
    std::vector<std::complex<double>> input(x.begin(), x.end());
    return forward(input);
}

} // namespace ltir::fft
