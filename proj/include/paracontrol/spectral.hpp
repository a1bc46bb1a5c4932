#ifndef PARACONTROL_SPECTRAL_HPP
#define PARACONTROL_SPECTRAL_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace paracontrol {

using Complex = std::complex<double>;
using Frequency = std::array<int, 2>;

// Rows are Fourier modes in FFT order, columns are value components.
using CoeffArray = Eigen::ArrayXXcd;

/// Uniform Fourier grid on the unit torus in dimension 1 or 2.
class FourierGrid {
public:
    FourierGrid() = default;
    explicit FourierGrid(int modes_per_axis, int dim = 1);

    int dim() const { return dim_; }
    int modes() const { return modes_; }
    Eigen::Index size() const { return dim_ == 1 ? modes_ : Eigen::Index(modes_) * modes_; }

    int frequency(int m) const { return m < modes_ / 2 ? m : m - modes_; }
    int axis_index(int k) const { return k >= 0 ? k : k + modes_; }
    Frequency frequencies(Eigen::Index flat) const;
    Eigen::Index flat_index(const Frequency& k) const;
    bool resolvable(const Frequency& k) const;
    bool is_nyquist(Eigen::Index flat) const;
    double radius(Eigen::Index flat) const;

    // J_max = log2(N) - 1
    int max_block() const;

    bool operator==(const FourierGrid& o) const { return modes_ == o.modes_ && dim_ == o.dim_; }
    bool operator!=(const FourierGrid& o) const { return !(*this == o); }

private:
    int modes_ = 0;
    int dim_ = 1;
};

/// A (possibly vector valued) periodic distribution stored by its Fourier coefficients.
class PeriodicField {
public:
    PeriodicField() = default;
    explicit PeriodicField(const FourierGrid& grid, int components = 1, bool real = true);
    PeriodicField(const FourierGrid& grid, CoeffArray coeffs, bool real);

    static PeriodicField constant(const FourierGrid& grid, double value, int components = 1);
    // e_k, flagged real only for k = 0
    static PeriodicField fourier_mode(const FourierGrid& grid, const Frequency& k);
    static PeriodicField cosine(const FourierGrid& grid, const Frequency& k, double amplitude = 1.0);
    static PeriodicField sine(const FourierGrid& grid, const Frequency& k, double amplitude = 1.0);
    // samples on the N^d grid, one column per component
    static PeriodicField from_values(const FourierGrid& grid, const Eigen::ArrayXXcd& values, bool real);

    const FourierGrid& grid() const { return grid_; }
    int components() const { return int(coeffs_.cols()); }
    bool is_real() const { return real_; }
    void set_real(bool r) { real_ = r; }

    const CoeffArray& coeffs() const { return coeffs_; }
    CoeffArray& coeffs() { return coeffs_; }
    Complex coeff(const Frequency& k, int c = 0) const;
    void set_coeff(const Frequency& k, Complex value, int c = 0);

    PeriodicField component(int c) const;
    void set_component(int c, const PeriodicField& f);

    Eigen::ArrayXXcd values() const;
    Complex evaluate(double x, int c = 0) const;
    Complex evaluate(double x, double y, int c) const;

    // max |c(-k) - conj c(k)|
    double hermitian_defect() const;

    PeriodicField& operator+=(const PeriodicField& o);
    PeriodicField& operator-=(const PeriodicField& o);
    PeriodicField& operator*=(double s);
    PeriodicField& operator*=(Complex s);

private:
    FourierGrid grid_;
    CoeffArray coeffs_;
    bool real_ = true;
};

PeriodicField operator+(PeriodicField a, const PeriodicField& b);
PeriodicField operator-(PeriodicField a, const PeriodicField& b);
PeriodicField operator-(PeriodicField a);
PeriodicField operator*(double s, PeriodicField a);
PeriodicField operator*(PeriodicField a, double s);
PeriodicField operator*(Complex s, PeriodicField a);

/// Smooth dyadic partition of unity sampled on a grid.
struct DyadicPartition {
    FourierGrid grid;
    int max_block = 0;
    // column j + 1 holds p_j
    Eigen::ArrayXXd weights;

    int block_count() const { return max_block + 2; }
    double weight(int j, Eigen::Index flat) const { return weights(flat, j + 1); }
    Eigen::ArrayXd block(int j) const { return weights.col(j + 1); }
};

// raised-cosine cutoff: 1 on [0, 1/2], 0 beyond 2/3
double dyadic_cutoff(double r);
// radial weight p_j(r); the top block max_block absorbs everything above it
double dyadic_weight(int j, double r, int max_block);

DyadicPartition make_dyadic_partition(const FourierGrid& grid);
// shared cached instance
const DyadicPartition& dyadic_partition(const FourierGrid& grid);

PeriodicField lp_block(const PeriodicField& u, int j);
// sup norms of every block (j = -1 .. J_max) over the 2x padded grid, max over components
Eigen::ArrayXd block_sup_norms(const PeriodicField& u);
double besov_norm_from_blocks(const Eigen::ArrayXd& sups, double theta);
double besov_norm(const PeriodicField& u, double theta);
double sup_norm(const PeriodicField& u);
// padded spatial samples (pad * N)^d x components
Eigen::ArrayXXcd padded_values(const PeriodicField& u, int pad = 2);

struct Paraproducts {
    PeriodicField less;
    PeriodicField resonant;
    PeriodicField greater;
};

Paraproducts paraproducts(const PeriodicField& u, const PeriodicField& v);
PeriodicField paraproduct(const PeriodicField& u, const PeriodicField& v);  // u < v
PeriodicField resonant(const PeriodicField& u, const PeriodicField& v);
// alias-free pointwise product, Nyquist mode dropped
PeriodicField product(const PeriodicField& u, const PeriodicField& v);

PeriodicField derivative(const PeriodicField& u, int axis = 0);
// scalar field -> d components
PeriodicField gradient(const PeriodicField& u);
// keep modes with max_a |k_a| <= n
PeriodicField truncate_modes(const PeriodicField& u, int n);
PeriodicField zero_nyquist(const PeriodicField& u);

/// Fields on a time grid.
class TimeField {
public:
    TimeField() = default;
    TimeField(std::vector<double> times, std::vector<PeriodicField> values, double regularity = 0.0);

    static TimeField constant(const std::vector<double>& times, const PeriodicField& value, double regularity = 0.0);

    const std::vector<double>& times() const { return times_; }
    const std::vector<PeriodicField>& values() const { return values_; }
    std::vector<PeriodicField>& values() { return values_; }
    std::size_t size() const { return times_.size(); }
    const PeriodicField& operator[](std::size_t i) const { return values_[i]; }
    PeriodicField& operator[](std::size_t i) { return values_[i]; }
    double start() const { return times_.front(); }
    double horizon() const { return times_.back(); }
    const FourierGrid& grid() const { return values_.front().grid(); }
    int components() const { return values_.front().components(); }
    double regularity() const { return regularity_; }
    void set_regularity(double r) { regularity_ = r; }
    // index of a grid time, throws if t is not on the grid
    std::size_t index_of(double t, double tol = 1e-12) const;

    TimeField component(int c) const;
    TimeField slice(std::size_t begin, std::size_t end) const;

    TimeField& operator+=(const TimeField& o);
    TimeField& operator-=(const TimeField& o);
    TimeField& operator*=(double s);

private:
    std::vector<double> times_;
    std::vector<PeriodicField> values_;
    double regularity_ = 0.0;
};

TimeField operator+(TimeField a, const TimeField& b);
TimeField operator-(TimeField a, const TimeField& b);
TimeField operator*(double s, TimeField a);

std::vector<double> uniform_times(double horizon, int steps);
bool same_times(const std::vector<double>& a, const std::vector<double>& b);

// sup_t ||u(t)||_theta
double time_sup_besov(const TimeField& u, double theta);
double time_sup_norm(const TimeField& u);

struct HolderNorm {
    double seminorm = 0.0;
    double sup = 0.0;
    double total() const { return seminorm + sup; }
};
HolderNorm time_holder_seminorm(const TimeField& u, double rho);

}  // namespace paracontrol

#endif
