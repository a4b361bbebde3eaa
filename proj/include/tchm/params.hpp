#ifndef TCHM_PARAMS_HPP
#define TCHM_PARAMS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tchm {

inline constexpr double two_pi = 6.283185307179586476925286766559;

enum class Boundary { open, periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// Array geometry and physical rates of the Tavis-Cummings-Hubbard chain.
// All rates are angular frequencies in rad/ns; a value quoted as
// "x GHz over 2pi" is stored as two_pi * x.
struct SystemParams {
    int n_cavities = 1;
    int emitters_per_cavity = 0;
    double omega_c = 0.0;
    double g = two_pi * 5.0;
    double j_hop = two_pi * 0.5;
    double kappa = two_pi * 10.0;
    double gamma = two_pi / 5.8;
    double delta = 0.0;
    Boundary boundary = Boundary::open;

    // g * sqrt(M); the effective light-matter rate of one node
    double collective_coupling() const;

    // throws std::invalid_argument on any violated bound
    void validate() const;
};

// One concrete disorder draw: per-emitter frequencies plus the inputs
// that produced them.
struct Realization {
    SystemParams params;
    Eigen::MatrixXd omega_e;  // n_cavities x emitters_per_cavity, rad/ns
    std::uint64_t seed = 0;
};

// Index convention for the single-excitation sector:
// cavity n -> n, emitter (n, m) -> N + n*M + m.
class SingleExcitationBasis {
  public:
    SingleExcitationBasis(int n_cavities, int emitters_per_cavity);

    int n_cavities() const { return n_; }
    int emitters_per_cavity() const { return m_; }
    int dimension() const { return n_ * (m_ + 1); }

    int index_of_cavity(int n) const;
    int index_of_emitter(int n, int m) const;

    bool is_cavity(int index) const { return index < n_; }
    int cavity_of(int index) const;                  // cavity index for a cavity slot
    std::pair<int, int> emitter_of(int index) const; // (n, m) for an emitter slot
    int node_of(int index) const;                    // node owning any slot

  private:
    int n_;
    int m_;
};

inline SingleExcitationBasis build_basis(const SystemParams& p) {
    return SingleExcitationBasis(p.n_cavities, p.emitters_per_cavity);
}

// Gaussian spectral disorder: omega_e ~ Normal(omega_c, sigma = delta/2),
// independently per emitter. Identical (params, seed) gives a bit-identical
// Realization.
Realization sample_disorder(const SystemParams& params, std::uint64_t seed);

}  // namespace tchm

#endif
