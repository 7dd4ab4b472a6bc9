// Times the OpenMP kernels against the serial reference implementations,
// plus the direct-vs-FFT convolution paths.
//
//   tcalc-bench [--n 256] [--kron 100] [--conv 2048] [--reps 3]

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tcalc/convolution.hpp"
#include "tcalc/einsum.hpp"
#include "tcalc/parallel.hpp"
#include "tcalc/products.hpp"
#include "tcalc/reference.hpp"

using namespace tcalc;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, const std::string& size, double serial_ms, double parallel_ms) {
    std::printf("%-26s %-14s %10.2f %12.2f %9.2fx\n", name, size.c_str(), serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n = 256;
    std::size_t kron_n = 100;
    std::size_t conv_n = 2048;
    int reps = 3;

    CLI::App app{"serial-reference vs parallel-kernel timings"};
    app.add_option("--n", n, "matrix extent for contraction benchmarks");
    app.add_option("--kron", kron_n, "operand extent for the kronecker benchmark");
    app.add_option("--conv", conv_n, "vector extent for the convolution benchmark");
    app.add_option("--reps", reps, "repetitions (best-of)");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n\n", par::max_threads());
    std::printf("%-26s %-14s %10s %12s %10s\n", "kernel", "size", "serial ms", "parallel ms",
                "speedup");

    {
        Tensor a = Tensor::random({n, n}, Dtype::f64, 1);
        Tensor b = Tensor::random({n, n}, Dtype::f64, 2);
        std::vector<int> ij{0, 1}, jk{1, 2}, ik{0, 2};
        const double serial =
            time_ms([&] { ref::contract_pair(a, ij, b, jk, ik); }, reps);
        const double parallel = time_ms([&] { contract_pair(a, ij, b, jk, ik); }, reps);
        row("pair contraction (ij,jk)", std::to_string(n) + "^2", serial, parallel);
    }

    {
        Tensor a = Tensor::random({kron_n, kron_n}, Dtype::f64, 3);
        Tensor b = Tensor::random({kron_n, kron_n}, Dtype::f64, 4);
        const double serial = time_ms([&] { ref::kronecker(a, b); }, reps);
        const double parallel = time_ms([&] { kronecker(a, b); }, reps);
        row("kronecker", std::to_string(kron_n) + "^2 x2", serial, parallel);
    }

    {
        Tensor a = Tensor::random({n * n}, Dtype::f64, 5);
        Tensor b = Tensor::random({n * n}, Dtype::f64, 6);
        Tensor am = Tensor::from_real({n, n},
                                      std::vector<double>(a.rdata(), a.rdata() + n * n));
        Tensor bm = Tensor::from_real({n, n},
                                      std::vector<double>(b.rdata(), b.rdata() + n * n));
        const double serial = time_ms([&] { ref::hadamard(am, bm); }, reps);
        const double parallel = time_ms([&] { hadamard(am, bm); }, reps);
        row("hadamard", std::to_string(n) + "^2", serial, parallel);
    }

    {
        Tensor a = Tensor::random({conv_n}, Dtype::f64, 7);
        Tensor b = Tensor::random({conv_n}, Dtype::f64, 8);
        const Signature sig = Signature::parse("++-");
        ConvOptions direct;
        direct.path = ConvPath::direct;
        ConvOptions fft;
        fft.path = ConvPath::fft;
        const double direct_ms = time_ms([&] { conv1d(a, b, sig, direct); }, reps);
        const double fft_ms = time_ms([&] { conv1d(a, b, sig, fft); }, reps);
        row("conv1d direct vs fft", "D=" + std::to_string(conv_n), direct_ms, fft_ms);
    }

    return 0;
}
