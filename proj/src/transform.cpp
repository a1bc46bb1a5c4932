#include "transform.hpp"

#include <unsupported/Eigen/FFT>

#include <vector>

namespace paracontrol::detail {

namespace {

Eigen::FFT<double>& fft_engine()
{
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

// in-place transform along both axes of an n x n row-major array
void transform_2d(std::vector<Complex>& data, int n, bool inverse)
{
    auto& fft = fft_engine();
    std::vector<Complex> in(n), out(n);
    for (int pass = 0; pass < 2; ++pass) {
        for (int line = 0; line < n; ++line) {
            for (int i = 0; i < n; ++i)
                in[i] = pass == 0 ? data[std::size_t(line) * n + i] : data[std::size_t(i) * n + line];
            if (inverse)
                fft.inv(out, in);
            else
                fft.fwd(out, in);
            for (int i = 0; i < n; ++i) {
                if (pass == 0)
                    data[std::size_t(line) * n + i] = out[i];
                else
                    data[std::size_t(i) * n + line] = out[i];
            }
        }
    }
}

void transform(std::vector<Complex>& data, int n, int dim, bool inverse)
{
    if (dim == 2) {
        transform_2d(data, n, inverse);
        return;
    }
    std::vector<Complex> out(n);
    if (inverse)
        fft_engine().inv(out, data);
    else
        fft_engine().fwd(out, data);
    data.swap(out);
}

}  // namespace

Eigen::ArrayXcd synthesize(const FourierGrid& grid, const Eigen::Ref<const Eigen::ArrayXcd>& coeffs, int pad)
{
    const int n = grid.modes();
    const int np = pad * n;
    const int d = grid.dim();
    const std::size_t total = d == 1 ? std::size_t(np) : std::size_t(np) * np;
    std::vector<Complex> data(total, Complex(0.0, 0.0));

    auto targets = [&](int k, int* idx, double* w) {
        if (pad > 1 && k == -n / 2) {
            idx[0] = np - n / 2;
            idx[1] = n / 2;
            w[0] = w[1] = 0.5;
            return 2;
        }
        idx[0] = k >= 0 ? k : k + np;
        w[0] = 1.0;
        return 1;
    };

    if (d == 1) {
        for (int m = 0; m < n; ++m) {
            int idx[2];
            double w[2];
            const int cnt = targets(grid.frequency(m), idx, w);
            for (int a = 0; a < cnt; ++a)
                data[idx[a]] += w[a] * coeffs(m);
        }
    } else {
        for (int m0 = 0; m0 < n; ++m0) {
            int i0[2], i1[2];
            double w0[2], w1[2];
            const int c0 = targets(grid.frequency(m0), i0, w0);
            for (int m1 = 0; m1 < n; ++m1) {
                const int c1 = targets(grid.frequency(m1), i1, w1);
                const Complex c = coeffs(Eigen::Index(m0) * n + m1);
                for (int a = 0; a < c0; ++a)
                    for (int b = 0; b < c1; ++b)
                        data[std::size_t(i0[a]) * np + i1[b]] += w0[a] * w1[b] * c;
            }
        }
    }
    transform(data, np, d, true);
    return Eigen::Map<Eigen::ArrayXcd>(data.data(), Eigen::Index(total));
}

Eigen::ArrayXcd analyze(const FourierGrid& grid, const Eigen::Ref<const Eigen::ArrayXcd>& values, int pad)
{
    const int n = grid.modes();
    const int np = pad * n;
    const int d = grid.dim();
    std::vector<Complex> data(values.data(), values.data() + values.size());
    transform(data, np, d, false);
    const double scale = d == 1 ? 1.0 / np : 1.0 / (double(np) * np);

    auto source = [&](int m) {
        const int k = grid.frequency(m);
        if (pad > 1 && k == -n / 2)
            return -1;
        return k >= 0 ? k : k + np;
    };

    Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(grid.size());
    if (d == 1) {
        for (int m = 0; m < n; ++m) {
            const int s = source(m);
            if (s >= 0)
                out(m) = data[s] * scale;
        }
    } else {
        for (int m0 = 0; m0 < n; ++m0) {
            const int s0 = source(m0);
            if (s0 < 0)
                continue;
            for (int m1 = 0; m1 < n; ++m1) {
                const int s1 = source(m1);
                if (s1 >= 0)
                    out(Eigen::Index(m0) * n + m1) = data[std::size_t(s0) * np + s1] * scale;
            }
        }
    }
    return out;
}

}  // namespace paracontrol::detail
