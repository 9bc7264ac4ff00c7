#include "satent/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "satent/error.hpp"

namespace satent {

using cplx = std::complex<double>;

namespace {

constexpr double kNegligibleAmplitude = 1e-150;

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

void check_probability(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

Occupation unpack(PureState::Key key, std::size_t modes) {
    Occupation occ(modes);
    for (std::size_t m = 0; m < modes; ++m) occ[m] = PureState::photons(key, m);
    return occ;
}

// Mixed-radix index of the occupations of `modes` (first most significant).
std::size_t sub_index(PureState::Key key, const std::vector<std::size_t>& modes, std::size_t base) {
    std::size_t idx = 0;
    for (std::size_t m : modes) idx = idx * base + static_cast<std::size_t>(PureState::photons(key, m));
    return idx;
}

std::vector<std::size_t> complement(std::size_t modes, const std::vector<std::size_t>& a,
                                    const std::vector<std::size_t>& b = {}) {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < modes; ++m)
        if (std::find(a.begin(), a.end(), m) == a.end() && std::find(b.begin(), b.end(), m) == b.end())
            out.push_back(m);
    return out;
}

void check_modes(const std::vector<std::size_t>& modes, std::size_t count, const char* what) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] >= count) throw DomainError(std::string(what) + " refers to a missing mode");
        for (std::size_t j = i + 1; j < modes.size(); ++j)
            if (modes[i] == modes[j]) throw DomainError(std::string(what) + " lists a mode twice");
    }
}

} // namespace

void FockSpace::validate() const {
    if (modes < 1) throw DomainError("a Fock space needs at least one mode");
    if (cutoff < 1 || cutoff > 255) throw DomainError("per-mode cutoff must lie in [1, 255]");
}

std::size_t FockSpace::dim() const {
    validate();
    double d = std::pow(static_cast<double>(local_dim()), static_cast<double>(modes));
    if (d > 1e9) throw DomainError("dense Fock space dimension too large");
    std::size_t r = 1;
    for (std::size_t m = 0; m < modes; ++m) r *= local_dim();
    return r;
}

std::size_t FockSpace::index(const Occupation& occ) const {
    if (occ.size() != modes) throw DomainError("occupation length does not match the mode count");
    std::size_t idx = 0;
    for (int n : occ) {
        if (n < 0 || n > cutoff) throw CutoffError("occupation outside the per-mode cutoff");
        idx = idx * local_dim() + static_cast<std::size_t>(n);
    }
    return idx;
}

Occupation FockSpace::occupation(std::size_t index) const {
    Occupation occ(modes);
    for (std::size_t m = modes; m-- > 0;) {
        occ[m] = static_cast<int>(index % local_dim());
        index /= local_dim();
    }
    return occ;
}

PureState::PureState(FockSpace space) : space_(space) {
    space_.validate();
    if (space_.modes > kMaxSparseModes) throw DomainError("sparse states support at most 8 modes");
}

PureState::Key PureState::pack(const Occupation& occ) {
    if (occ.size() > kMaxSparseModes) throw DomainError("sparse states support at most 8 modes");
    Key k = 0;
    for (std::size_t m = 0; m < occ.size(); ++m) {
        if (occ[m] < 0 || occ[m] > 255) throw CutoffError("occupation outside [0, 255]");
        k |= static_cast<Key>(occ[m]) << (8 * m);
    }
    return k;
}

PureState::Key PureState::with_photons(Key key, std::size_t mode, int n) {
    const Key mask = Key{0xFF} << (8 * mode);
    return (key & ~mask) | (static_cast<Key>(n) << (8 * mode));
}

void PureState::add(const Occupation& occ, cplx amp) {
    if (occ.size() != space_.modes) throw DomainError("occupation length does not match the mode count");
    for (int n : occ)
        if (n > space_.cutoff) throw CutoffError("occupation exceeds the per-mode cutoff");
    terms_.emplace_back(pack(occ), amp);
}

void PureState::add_key(Key key, cplx amp) { terms_.emplace_back(key, amp); }

cplx PureState::amplitude(const Occupation& occ) const {
    const Key k = pack(occ);
    cplx sum = 0.0;
    for (const auto& [key, a] : terms_)
        if (key == k) sum += a;
    return sum;
}

double PureState::norm_squared() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::norm(t.second);
    return s;
}

PureState PureState::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw InvalidStateError("cannot normalize a zero state");
    PureState out = *this;
    const double s = 1.0 / std::sqrt(n2);
    for (auto& t : out.terms_) t.second *= s;
    return out;
}

void PureState::canonicalize(double drop_below) {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!merged.empty() && merged.back().first == t.first)
            merged.back().second += t.second;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [&](const Term& t) { return std::abs(t.second) <= drop_below; });
    terms_ = std::move(merged);
}

PureState PureState::with_cutoff(int cutoff) const {
    PureState out(FockSpace{space_.modes, cutoff});
    for (const auto& [key, a] : terms_) {
        for (std::size_t m = 0; m < space_.modes; ++m)
            if (photons(key, m) > cutoff && a != cplx{})
                throw CutoffError("state does not fit the requested cutoff");
        out.terms_.emplace_back(key, a);
    }
    return out;
}

Eigen::VectorXcd PureState::to_dense() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space_.dim()));
    for (const auto& [key, a] : terms_)
        v(static_cast<Eigen::Index>(space_.index(unpack(key, space_.modes)))) += a;
    return v;
}

PureState tensor(const PureState& a, const PureState& b) {
    const std::size_t ma = a.space().modes;
    PureState out(FockSpace{ma + b.space().modes, std::max(a.space().cutoff, b.space().cutoff)});
    for (const auto& [ka, va] : a.terms())
        for (const auto& [kb, vb] : b.terms()) out.add_key(ka | (kb << (8 * ma)), va * vb);
    out.canonicalize();
    return out;
}

PureState dv_bell(double xi, int cutoff) {
    check_probability(xi, "xi");
    PureState s(FockSpace{2, cutoff});
    s.add({0, 1}, std::sqrt(xi));
    s.add({1, 0}, std::sqrt(1.0 - xi));
    s.canonicalize();
    return s;
}

PureState tmsv_truncated(double chi, int n_max, int cutoff) {
    if (!(chi >= 0.0 && chi < 1.0)) throw DomainError("chi must lie in [0, 1)");
    if (n_max < 0) throw DomainError("truncation must be nonnegative");
    const int c = cutoff < 0 ? std::max(1, n_max) : cutoff;
    if (c < n_max) throw CutoffError("cutoff below the truncation order");
    PureState s(FockSpace{2, c});
    double amp = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        s.add({n, n}, amp);
        amp *= chi;
    }
    s.canonicalize();
    return s.normalized();
}

double tmsv_truncation_fidelity(double chi, int n_max) {
    if (!(chi >= 0.0 && chi < 1.0)) throw DomainError("chi must lie in [0, 1)");
    // <TMSV|trunc> = sqrt(1 - chi^2) sum chi^{2n} / sqrt(sum chi^{2n})
    double s = 0.0, w = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        s += w;
        w *= chi * chi;
    }
    return (1.0 - chi * chi) * s;
}

double gain_to_tau(double g) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("gain must be finite and nonnegative");
    return g * g / (1.0 + g * g);
}

double tau_to_gain(double tau) {
    if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("tau must lie in [0, 1)");
    return std::sqrt(tau / (1.0 - tau));
}

PureState scissor_ancilla(double tau, int cutoff) {
    if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("scissor tau must lie in [0, 1): infinite gain");
    PureState s(FockSpace{2, cutoff});
    s.add({1, 0}, std::sqrt(tau));
    s.add({0, 1}, std::sqrt(1.0 - tau));
    s.canonicalize();
    return s;
}

Eigen::MatrixXd beamsplitter_block(int n, double tau) {
    check_probability(tau, "beamsplitter transmissivity");
    if (n < 0) throw DomainError("photon number must be nonnegative");
    const double s = std::sqrt(tau), t = std::sqrt(1.0 - tau);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int a = 0; a <= n; ++a) {
        const int b = n - a;
        const double in_norm = 1.0 / std::sqrt(factorial(a) * factorial(b));
        for (int i = 0; i <= a; ++i) {
            for (int j = 0; j <= b; ++j) {
                const int k = i + j;
                const double c = binomial(a, i) * binomial(b, j) * std::pow(s, i + b - j)
                               * std::pow(t, a - i + j) * ((j % 2) ? -1.0 : 1.0);
                out(k, a) += c * std::sqrt(factorial(k) * factorial(n - k)) * in_norm;
            }
        }
    }
    return out;
}

PureState beamsplitter(const PureState& state, std::size_t mode_x, std::size_t mode_y, double tau) {
    check_probability(tau, "beamsplitter transmissivity");
    const auto& sp = state.space();
    if (mode_x >= sp.modes || mode_y >= sp.modes || mode_x == mode_y)
        throw DomainError("beamsplitter needs two distinct existing modes");
    std::vector<Eigen::MatrixXd> blocks;
    auto block = [&](int n) -> const Eigen::MatrixXd& {
        while (static_cast<int>(blocks.size()) <= n) blocks.push_back(beamsplitter_block(static_cast<int>(blocks.size()), tau));
        return blocks[static_cast<std::size_t>(n)];
    };

    PureState out(sp);
    std::vector<PureState::Term> terms;
    terms.reserve(state.size() * 3);
    for (const auto& [key, amp] : state.terms()) {
        const int x = PureState::photons(key, mode_x);
        const int y = PureState::photons(key, mode_y);
        const int n = x + y;
        const auto& B = block(n);
        for (int k = 0; k <= n; ++k) {
            const double c = B(k, x);
            if (std::abs(c) <= 1e-14) continue;
            if (k > sp.cutoff || n - k > sp.cutoff) {
                throw CutoffError("beamsplitter on modes " + std::to_string(mode_x) + "," + std::to_string(mode_y)
                                  + " populates " + std::to_string(n) + " photons beyond cutoff "
                                  + std::to_string(sp.cutoff));
            }
            PureState::Key nk = PureState::with_photons(key, mode_x, k);
            nk = PureState::with_photons(nk, mode_y, n - k);
            out.add_key(nk, c * amp);
        }
    }
    out.canonicalize(kNegligibleAmplitude);
    return out;
}

PureState phase_rotation(const PureState& state, std::size_t mode, double phi) {
    if (mode >= state.space().modes) throw DomainError("phase rotation on a missing mode");
    PureState out(state.space());
    for (const auto& [key, amp] : state.terms())
        out.add_key(key, amp * std::polar(1.0, phi * PureState::photons(key, mode)));
    out.canonicalize();
    return out;
}

DensityOp::DensityOp(FockSpace space, Eigen::MatrixXcd rho) : space_(space), rho_(std::move(rho)) {
    const auto d = static_cast<Eigen::Index>(space_.dim());
    if (rho_.rows() != d || rho_.cols() != d) throw DomainError("density matrix size does not match the space");
}

DensityOp DensityOp::from_pure(const PureState& psi) {
    const Eigen::VectorXcd v = psi.to_dense();
    return DensityOp(psi.space(), v * v.adjoint());
}

DensityOp DensityOp::normalized() const {
    const double t = trace();
    if (!(t > 0.0)) throw InvalidStateError("cannot normalize a density operator with zero trace");
    return DensityOp(space_, rho_ / t);
}

void DensityOp::check_physical(double tol) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw InvalidStateError("density operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) throw InvalidStateError("density operator has a negative eigenvalue");
}

DensityOp partial_trace(const DensityOp& rho, const std::vector<std::size_t>& keep_modes) {
    const auto& sp = rho.space();
    if (keep_modes.empty()) throw DomainError("partial trace needs at least one kept mode");
    check_modes(keep_modes, sp.modes, "partial trace");
    const auto traced = complement(sp.modes, keep_modes);
    const FockSpace out_space{keep_modes.size(), sp.cutoff};
    const std::size_t d = sp.dim();
    const std::size_t base = sp.local_dim();

    std::vector<std::size_t> ki(d), ti(d);
    for (std::size_t i = 0; i < d; ++i) {
        const Occupation occ = sp.occupation(i);
        std::size_t k = 0, t = 0;
        for (std::size_t m : keep_modes) k = k * base + static_cast<std::size_t>(occ[m]);
        for (std::size_t m : traced) t = t * base + static_cast<std::size_t>(occ[m]);
        ki[i] = k;
        ti[i] = t;
    }
    std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < d; ++i) groups[ti[i]].push_back(i);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out_space.dim()),
                                                  static_cast<Eigen::Index>(out_space.dim()));
    const auto& M = rho.matrix();
    for (const auto& [t, idx] : groups)
        for (std::size_t i : idx)
            for (std::size_t j : idx)
                out(static_cast<Eigen::Index>(ki[i]), static_cast<Eigen::Index>(ki[j])) +=
                    M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return DensityOp(out_space, std::move(out));
}

DensityOp pure_loss(const DensityOp& rho, std::size_t mode, double eta) {
    check_probability(eta, "loss transmissivity");
    const auto& sp = rho.space();
    if (mode >= sp.modes) throw DomainError("loss applied to a missing mode");
    const std::size_t d = sp.dim();
    std::size_t stride = 1;
    for (std::size_t m = sp.modes - 1; m > mode; --m) stride *= sp.local_dim();

    // Kraus amplitude for losing l of n photons.
    auto kraus = [&](int n, int l) {
        return std::sqrt(binomial(n, l) * std::pow(eta, n - l) * std::pow(1.0 - eta, l));
    };
    std::vector<int> nph(d);
    for (std::size_t i = 0; i < d; ++i) nph[i] = static_cast<int>((i / stride) % sp.local_dim());

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const auto& M = rho.matrix();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const cplx v = M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v == cplx{}) continue;
            const int lmax = std::min(nph[i], nph[j]);
            for (int l = 0; l <= lmax; ++l) {
                const auto ii = static_cast<Eigen::Index>(i - static_cast<std::size_t>(l) * stride);
                const auto jj = static_cast<Eigen::Index>(j - static_cast<std::size_t>(l) * stride);
                out(ii, jj) += kraus(nph[i], l) * kraus(nph[j], l) * v;
            }
        }
    }
    return DensityOp(sp, std::move(out));
}

DensityOp pure_loss(const PureState& psi, std::size_t mode, double eta) {
    const std::size_t m = psi.space().modes;
    if (mode >= m) throw DomainError("loss applied to a missing mode");
    PureState env(FockSpace{1, psi.space().cutoff});
    env.add({0}, 1.0);
    const PureState joint = beamsplitter(tensor(psi, env), mode, m, eta);
    std::vector<std::size_t> keep(m);
    for (std::size_t i = 0; i < m; ++i) keep[i] = i;
    return herald(joint, {}, {HeraldBranch{}}, keep).state;
}

DensityOp phase_rotation(const DensityOp& rho, std::size_t mode, double phi) {
    const auto& sp = rho.space();
    if (mode >= sp.modes) throw DomainError("phase rotation on a missing mode");
    const std::size_t d = sp.dim();
    Eigen::VectorXcd ph(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        ph(static_cast<Eigen::Index>(i)) = std::polar(1.0, phi * sp.occupation(i)[mode]);
    Eigen::MatrixXcd out = ph.asDiagonal() * rho.matrix() * ph.conjugate().asDiagonal();
    return DensityOp(sp, std::move(out));
}

std::vector<HeraldBranch> scissor_success(std::size_t surviving_mode) {
    return {HeraldBranch{{1, 0}, {}}, HeraldBranch{{0, 1}, {surviving_mode}}};
}

std::vector<HeraldBranch> photon_number_povm(std::size_t count, int cutoff) {
    const FockSpace sp{count, cutoff};
    std::vector<HeraldBranch> out;
    for (std::size_t i = 0; i < sp.dim(); ++i) out.push_back(HeraldBranch{sp.occupation(i), {}});
    return out;
}

namespace {

void check_branches(const std::vector<std::size_t>& measured, const std::vector<HeraldBranch>& branches) {
    if (branches.empty()) throw DomainError("a herald needs at least one branch");
    for (const auto& b : branches)
        if (b.pattern.size() != measured.size())
            throw DomainError("herald pattern length does not match the measured modes");
}

double finish_probability(const Eigen::MatrixXcd& rho) {
    const double p = rho.trace().real();
    if (!(p >= 1e-300)) throw ImprobableBranchError("heralded outcome has vanishing probability");
    return p;
}

} // namespace

HeraldResult herald(const PureState& psi, const std::vector<std::size_t>& measured,
                    const std::vector<HeraldBranch>& branches,
                    const std::vector<std::size_t>& keep_modes) {
    const auto& sp = psi.space();
    check_branches(measured, branches);
    check_modes(measured, sp.modes, "measurement");
    check_modes(keep_modes, sp.modes, "kept modes");
    for (std::size_t k : keep_modes)
        if (std::find(measured.begin(), measured.end(), k) != measured.end())
            throw DomainError("a mode cannot be both measured and kept");
    if (keep_modes.empty()) throw DomainError("herald needs at least one kept mode");
    const auto traced = complement(sp.modes, measured, keep_modes);
    const FockSpace out_space{keep_modes.size(), sp.cutoff};
    const auto d = static_cast<Eigen::Index>(out_space.dim());
    const std::size_t base = sp.local_dim();

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& br : branches) {
        std::unordered_map<std::size_t, Eigen::VectorXcd> columns;
        for (const auto& [key, amp] : psi.terms()) {
            bool match = true;
            for (std::size_t i = 0; i < measured.size() && match; ++i)
                match = PureState::photons(key, measured[i]) == br.pattern[i];
            if (!match) continue;
            int parity = 0;
            for (std::size_t m : br.parity_modes) parity += PureState::photons(key, m);
            const cplx a = (parity % 2) ? -amp : amp;
            auto [it, inserted] = columns.try_emplace(sub_index(key, traced, base));
            if (inserted) it->second = Eigen::VectorXcd::Zero(d);
            it->second(static_cast<Eigen::Index>(sub_index(key, keep_modes, base))) += a;
        }
        for (const auto& [env, v] : columns) rho.noalias() += v * v.adjoint();
    }
    const double p = finish_probability(rho);
    return {DensityOp(out_space, std::move(rho)), p};
}

HeraldResult povm_project(const DensityOp& rho, const std::vector<std::size_t>& measured,
                          const std::vector<HeraldBranch>& branches,
                          const std::vector<std::size_t>& keep_modes) {
    const auto& sp = rho.space();
    check_branches(measured, branches);
    check_modes(measured, sp.modes, "measurement");
    const auto remaining = complement(sp.modes, measured);
    if (remaining.empty()) throw DomainError("measurement leaves no modes");
    const FockSpace rem_space{remaining.size(), sp.cutoff};
    const std::size_t d = sp.dim();
    const std::size_t base = sp.local_dim();
    const auto dr = static_cast<Eigen::Index>(rem_space.dim());

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dr, dr);
    const auto& M = rho.matrix();
    for (const auto& br : branches) {
        std::vector<std::pair<std::size_t, std::pair<std::size_t, double>>> sel;
        for (std::size_t i = 0; i < d; ++i) {
            const Occupation occ = sp.occupation(i);
            bool match = true;
            for (std::size_t k = 0; k < measured.size() && match; ++k) match = occ[measured[k]] == br.pattern[k];
            if (!match) continue;
            int parity = 0;
            for (std::size_t m : br.parity_modes) parity += occ[m];
            std::size_t r = 0;
            for (std::size_t m : remaining) r = r * base + static_cast<std::size_t>(occ[m]);
            sel.push_back({i, {r, (parity % 2) ? -1.0 : 1.0}});
        }
        for (const auto& [i, ri] : sel)
            for (const auto& [j, rj] : sel)
                out(static_cast<Eigen::Index>(ri.first), static_cast<Eigen::Index>(rj.first)) +=
                    ri.second * rj.second * M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    finish_probability(out);

    // Kept modes are addressed by their original labels.
    std::vector<std::size_t> keep_pos;
    for (std::size_t k : keep_modes) {
        const auto it = std::find(remaining.begin(), remaining.end(), k);
        if (it == remaining.end()) throw DomainError("kept mode is measured or missing");
        keep_pos.push_back(static_cast<std::size_t>(it - remaining.begin()));
    }
    DensityOp reduced = partial_trace(DensityOp(rem_space, std::move(out)), keep_pos);
    const double p = reduced.trace();
    return {std::move(reduced), p};
}

double entropy(const Eigen::MatrixXcd& rho) {
    // Compress onto the support: a zero diagonal entry of a PSD matrix
    // implies a zero row and column.
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        if (std::abs(rho(i, i)) > 1e-300) support.push_back(i);
    if (support.empty()) return 0.0;
    const auto n = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXcd sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = rho(support[static_cast<std::size_t>(i)], support[static_cast<std::size_t>(j)]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double l = es.eigenvalues()(i);
        if (l < -1e-8) throw InvalidStateError("density operator has eigenvalue " + std::to_string(l));
        const double c = std::clamp(l, 0.0, 1.0);
        if (c > 0.0) s -= c * std::log(c);
    }
    return s;
}

double entropy(const DensityOp& rho) {
    if (std::abs(rho.trace() - 1.0) > 1e-8) throw InvalidStateError("entropy requires a unit-trace state");
    return entropy(rho.matrix());
}

CoherentInfo coherent_info(const DensityOp& rho, const std::vector<std::size_t>& a_modes,
                           const std::vector<std::size_t>& b_modes) {
    const auto& sp = rho.space();
    check_modes(a_modes, sp.modes, "partition A");
    check_modes(b_modes, sp.modes, "partition B");
    if (a_modes.size() + b_modes.size() != sp.modes || !complement(sp.modes, a_modes, b_modes).empty())
        throw DomainError("partition must cover every mode exactly once");
    const DensityOp n = rho.normalized();
    const double s_ab = entropy(n);
    const double s_a = entropy(partial_trace(n, a_modes));
    const double s_b = entropy(partial_trace(n, b_modes));
    return {s_b - s_ab, s_a - s_ab};
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.space().modes != b.space().modes) throw DomainError("fidelity between different mode counts");
    PureState x = a, y = b;
    x.canonicalize();
    y.canonicalize();
    cplx overlap = 0.0;
    auto i = x.terms().begin(), j = y.terms().begin();
    while (i != x.terms().end() && j != y.terms().end()) {
        if (i->first < j->first) ++i;
        else if (j->first < i->first) ++j;
        else {
            overlap += std::conj(i->second) * j->second;
            ++i;
            ++j;
        }
    }
    return std::norm(overlap) / (x.norm_squared() * y.norm_squared());
}

double fidelity(const DensityOp& rho, const PureState& psi) {
    if (!(rho.space() == psi.space())) throw DomainError("fidelity needs matching spaces");
    const Eigen::VectorXcd v = psi.to_dense();
    return (v.adjoint() * rho.matrix() * v)(0, 0).real() / (rho.trace() * v.squaredNorm());
}

} // namespace satent
