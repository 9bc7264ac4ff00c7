#pragma once

// Finite-cutoff multimode Fock-space states.
//
// PureState is sparse: only populated basis vectors are stored, keyed by a
// packed occupation word (8 bits per mode, at most 8 modes). DensityOp is a
// dense Hermitian matrix over the mixed-radix product basis and is meant for
// small spaces (reduced states and brute-force checks).

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace satent {

using Occupation = std::vector<int>;

struct FockSpace {
    std::size_t modes = 1;
    int cutoff = 1; // max photons per mode

    void validate() const;
    std::size_t local_dim() const { return static_cast<std::size_t>(cutoff) + 1; }
    std::size_t dim() const;
    // Mixed-radix index, mode 0 most significant.
    std::size_t index(const Occupation& occ) const;
    Occupation occupation(std::size_t index) const;

    bool operator==(const FockSpace&) const = default;
};

inline constexpr std::size_t kMaxSparseModes = 8;

class PureState {
public:
    using Key = std::uint64_t;
    using Term = std::pair<Key, std::complex<double>>;

    PureState() = default;
    explicit PureState(FockSpace space);

    static Key pack(const Occupation& occ);
    static int photons(Key key, std::size_t mode) { return static_cast<int>((key >> (8 * mode)) & 0xFFu); }
    static Key with_photons(Key key, std::size_t mode, int n);

    const FockSpace& space() const noexcept { return space_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    // Adds `amp` to the coefficient of |occ>.
    void add(const Occupation& occ, std::complex<double> amp);
    void add_key(Key key, std::complex<double> amp);

    std::complex<double> amplitude(const Occupation& occ) const;
    double norm_squared() const;
    PureState normalized() const;

    // Sorts by key, merges duplicates and drops |c| <= drop_below.
    void canonicalize(double drop_below = 0.0);

    // Same amplitudes in a space with a different cutoff; throws
    // CutoffError when a populated vector does not fit.
    PureState with_cutoff(int cutoff) const;

    // Dense amplitude vector over space().dim().
    Eigen::VectorXcd to_dense() const;

private:
    FockSpace space_{};
    std::vector<Term> terms_;
};

// |a> (x) |b>; the result cutoff is the larger of the two.
PureState tensor(const PureState& a, const PureState& b);

// sqrt(xi)|0,1> + sqrt(1-xi)|1,0>.
PureState dv_bell(double xi, int cutoff = 1);

// Normalized sum_{n<=N} chi^n |n,n>, in a space of per-mode cutoff `cutoff`
// (defaults to N).
PureState tmsv_truncated(double chi, int n_max, int cutoff = -1);

// Fidelity |<TMSV|trunc>|^2 between the truncated and the infinite TMSV.
double tmsv_truncation_fidelity(double chi, int n_max);

double gain_to_tau(double g);
double tau_to_gain(double tau);

// sqrt(tau)|1,0> + sqrt(1-tau)|0,1>. Mode 0 is kept by the amplifying
// party; mode 1 is fed to the balanced beamsplitter, so g >= 1 amplifies.
PureState scissor_ancilla(double tau, int cutoff = 1);

// Matrix of the two-mode rotation on the n-photon block, indexed by the
// photon number in the first mode: out[k][a] = <k, n-k| U |a, n-a>, with
// U a^dag U^dag = sqrt(tau) a^dag + sqrt(1-tau) b^dag and
// U b^dag U^dag = -sqrt(1-tau) a^dag + sqrt(tau) b^dag.
Eigen::MatrixXd beamsplitter_block(int n, double tau);

PureState beamsplitter(const PureState& state, std::size_t mode_x, std::size_t mode_y, double tau);

// Multiplies by exp(i phi n) on `mode`.
PureState phase_rotation(const PureState& state, std::size_t mode, double phi);

class DensityOp {
public:
    DensityOp() = default;
    DensityOp(FockSpace space, Eigen::MatrixXcd rho);

    static DensityOp from_pure(const PureState& psi);

    const FockSpace& space() const noexcept { return space_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
    double trace() const { return rho_.trace().real(); }
    DensityOp normalized() const;

    // Hermiticity within tol and eigenvalues >= -tol.
    void check_physical(double tol = 1e-10) const;

private:
    FockSpace space_{};
    Eigen::MatrixXcd rho_;
};

DensityOp partial_trace(const DensityOp& rho, const std::vector<std::size_t>& keep_modes);

// Attenuates `mode` with transmissivity eta via the Kraus representation.
DensityOp pure_loss(const DensityOp& rho, std::size_t mode, double eta);

// Attaches a vacuum environment, beamsplits and traces it out.
DensityOp pure_loss(const PureState& psi, std::size_t mode, double eta);

DensityOp phase_rotation(const DensityOp& rho, std::size_t mode, double phi);

// One heralded detection pattern on the measured modes followed by a parity
// correction exp(i pi n) on each listed surviving mode.
struct HeraldBranch {
    Occupation pattern;
    std::vector<std::size_t> parity_modes;
};

// Two-detector quantum-scissor success: |1,0> with no correction and |0,1>
// with the parity correction on `surviving_mode`.
std::vector<HeraldBranch> scissor_success(std::size_t surviving_mode);

// Every photon-number pattern on `count` modes up to the cutoff (a complete
// projective measurement).
std::vector<HeraldBranch> photon_number_povm(std::size_t count, int cutoff);

struct HeraldResult {
    DensityOp state;      // unnormalized, over the kept modes
    double probability;   // its trace
};

// Sum over branches of K_b rho K_b^dag with the measured modes projected out,
// then a partial trace onto `keep_modes`. Modes that are neither measured nor
// kept are traced. Throws ImprobableBranchError when p < 1e-300.
HeraldResult herald(const PureState& psi, const std::vector<std::size_t>& measured,
                    const std::vector<HeraldBranch>& branches,
                    const std::vector<std::size_t>& keep_modes);

HeraldResult povm_project(const DensityOp& rho, const std::vector<std::size_t>& measured,
                          const std::vector<HeraldBranch>& branches,
                          const std::vector<std::size_t>& keep_modes);

// Von Neumann entropy in nats. Eigenvalues below -1e-8 raise InvalidStateError.
double entropy(const Eigen::MatrixXcd& rho);
double entropy(const DensityOp& rho);

struct CoherentInfo {
    double forward; // S(B) - S(AB)
    double reverse; // S(A) - S(AB)
};

// `a_modes` and `b_modes` partition the modes of rho; normalizes first.
CoherentInfo coherent_info(const DensityOp& rho, const std::vector<std::size_t>& a_modes,
                           const std::vector<std::size_t>& b_modes);

double fidelity(const PureState& a, const PureState& b);
double fidelity(const DensityOp& rho, const PureState& psi);

} // namespace satent
