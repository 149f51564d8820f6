#include "steklov/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "steklov/error.hpp"

namespace steklov {

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Unaligned plans so they can be executed on arbitrary caller buffers through
// the new-array execute interface.
fftw_plan plan_for(int n, int sign) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, PlanPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, sign}];
    if (!slot) {
        std::vector<fftw_complex> a(static_cast<std::size_t>(n) + 1), b(static_cast<std::size_t>(n) + 1);
        slot.reset(fftw_plan_dft_1d(n, a.data() + 1, b.data() + 1, sign, FFTW_ESTIMATE | FFTW_UNALIGNED));
        if (!slot) throw Error(ErrorKind::InvalidArgument, "FFTW plan creation failed");
    }
    return slot.get();
}

void run(std::span<const cplx> in, std::span<cplx> out, int sign) {
    if (in.size() != out.size()) throw Error(ErrorKind::InvalidArgument, "fft size mismatch");
    if (in.empty()) return;
    const int n = static_cast<int>(in.size());
    fftw_plan p = plan_for(n, sign);
    // fftw does not modify the input of an out-of-place complex transform.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    if (src == dst) {
        std::vector<cplx> tmp(in.begin(), in.end());
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()), dst);
    } else {
        fftw_execute_dft(p, src, dst);
    }
}

}  // namespace

void fft_forward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_FORWARD); }
void fft_backward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_BACKWARD); }

}  // namespace steklov
