// Scattering matrix of the square junction over propagating channel modes,
// assembled from direct quadrant solves for left incidence and completed by
// the four-fold rotation relabeling.
//
// Channel order is Left, Up, Right, Down; each channel carries an even
// (cosine) and an odd (sine) block of propagating modes. Incoming amplitudes
// are ordered the same way, so diagonal blocks are reflections. The odd
// blocks span every propagating odd mode; the reported count q_tilde of
// propagating_counts() omits the fundamental odd mode, but a lossless
// scattering matrix must carry it or unitarity fails by the excluded flux.
#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "crossguide/detail/parallel.hpp"
#include "crossguide/diagnostics.hpp"
#include "crossguide/full_field.hpp"
#include "crossguide/quadrant.hpp"

namespace crossguide {

enum class Direction { Left, Up, Right, Down };

inline const char* to_string(Direction d) {
    switch (d) {
        case Direction::Left: return "left";
        case Direction::Up: return "up";
        case Direction::Right: return "right";
        case Direction::Down: return "down";
    }
    return "?";
}

enum class Normalization { RawAmplitude, FluxNormalized };

struct ChannelWave {
    Direction direction;
    ModeFamily parity;
    Eigen::VectorXcd amplitudes;
};

struct SMatrix {
    double k = 0.0;
    Geometry geometry{};
    int q = 0;       ///< reported even count parameter (q+1 even modes)
    int q_tilde = 0; ///< reported odd count (excludes the fundamental odd mode)
    int n_even = 0;  ///< actual even block size = q+1
    int n_odd = 0;   ///< actual odd block size = number of propagating odd modes
    Normalization normalization = Normalization::RawAmplitude;
    int truncation = 0;
    /// blocks[out_slot][in_slot]; slot = 2*channel + (parity == Odd),
    /// channels in order L, U, R, D
    std::array<std::array<Eigen::MatrixXcd, 8>, 8> blocks;

    int slot_size(int slot) const { return slot % 2 == 0 ? n_even : n_odd; }
    int dim() const { return 4 * (n_even + n_odd); }

    /// Dense matrix in slot order.
    Eigen::MatrixXcd dense() const {
        Eigen::MatrixXcd S(dim(), dim());
        int r0 = 0;
        for (int i = 0; i < 8; ++i) {
            int c0 = 0;
            for (int j = 0; j < 8; ++j) {
                S.block(r0, c0, slot_size(i), slot_size(j)) = blocks[i][j];
                c0 += slot_size(j);
            }
            r0 += slot_size(i);
        }
        return S;
    }
};

namespace detail {

/// True for the slot pairs forbidden by symmetry: parities cannot mix between
/// two horizontal channels or between two vertical channels.
inline bool forbidden_block(int out_slot, int in_slot) {
    const int co = out_slot / 2, ci = in_slot / 2;           // channels, L=0 U=1 R=2 D=3
    const bool same_axis = (co % 2) == (ci % 2);             // L/R even index parity, U/D odd
    const bool parity_mix = (out_slot % 2) != (in_slot % 2);
    return same_axis && parity_mix;
}

/// Flux weight of a propagating mode: mubar * ||mode||^2 over half a channel.
inline double flux_weight(ModeFamily fam, int n, double L, double k) {
    const cplx mb = axial_wavenumber(k, eigenvalue(fam, n, L));
    if (mb.imag() != 0.0 || mb.real() < kCutOnTol * k)
        throw DegenerateCutOn("flux weight of a non-propagating mode");
    return mb.real() * diagonal_norm(fam, n, L);
}

} // namespace detail

/// Builds the raw-amplitude scattering matrix at truncation N. Requires the
/// square junction a1 = a2, b1 = b2 and k away from every cut-on. Column
/// solves run across `jobs` workers.
inline SMatrix build_smatrix(const Geometry& g, double k, int N, int jobs = 1) {
    if (g.a1 != g.a2 || g.b1 != g.b2)
        throw GeometryRestriction("scattering matrix requires a1 = a2 and b1 = b2");
    if (near_cut_on(ModeFamily::Even, k, g.a1) || near_cut_on(ModeFamily::Odd, k, g.a1))
        throw DegenerateCutOn("k lies on a channel mode cut-on");

    SMatrix S;
    S.k = k;
    S.geometry = g;
    S.truncation = N;
    const PropagatingCounts pc = propagating_counts(k, g.a1);
    S.q = pc.q;
    S.q_tilde = pc.q_tilde;
    S.n_even = propagating_mode_count(ModeFamily::Even, k, g.a1);
    S.n_odd = propagating_mode_count(ModeFamily::Odd, k, g.a1);
    if (S.n_even > N + 1 || S.n_odd > N)
        throw ValidationError("truncation N too small for the propagating mode set");

    const int ne = S.n_even, no = S.n_odd;
    const int nch = ne + no;
    Eigen::MatrixXcd flat = Eigen::MatrixXcd::Zero(4 * nch, 4 * nch);
    auto slot_offset = [&](int ch, bool odd) { return ch * nch + (odd ? ne : 0); };

    // --- left-incidence columns from direct solves ---------------------------
    // even incidence p: NN (x-even) and DN (x-odd); odd incidence p: ND and DD
    std::vector<FullSolution> solves;
    solves.reserve(ne + no);
    for (int p = 0; p < ne; ++p)
        solves.push_back(FullSolution{ModeFamily::Even, QuadrantSolution{}, QuadrantSolution{}});
    for (int p = 0; p < no; ++p)
        solves.push_back(FullSolution{ModeFamily::Odd, QuadrantSolution{}, QuadrantSolution{}});
    detail::parallel_for(ne + no, jobs, [&](int i) {
        const ModeFamily parity = i < ne ? ModeFamily::Even : ModeFamily::Odd;
        const int p = i < ne ? i : i - ne;
        solves[i] = solve_full(g, k, parity, p, N);
    });
    auto fill_left_column = [&](ModeFamily parity, int p, int col) {
        const FullSolution& full = solves[parity == ModeFamily::Even ? p : ne + p];
        const auto& qe = full.even_x;
        const auto& qo = full.odd_x;
        const bool odd_par = parity == ModeFamily::Odd;
        const int nrefl = odd_par ? no : ne;
        for (int m = 0; m < nrefl; ++m) {
            flat(slot_offset(0, odd_par) + m, col) = 0.5 * (qe.A(m) + qo.A(m)); // back left
            flat(slot_offset(2, odd_par) + m, col) = 0.5 * (qe.A(m) - qo.A(m)); // through
        }
        const double dsign = odd_par ? -1.0 : 1.0; // odd-parity field is odd in y
        for (int m = 0; m < ne; ++m) {
            flat(slot_offset(1, false) + m, col) = 0.5 * qe.D(m);
            flat(slot_offset(3, false) + m, col) = dsign * 0.5 * qe.D(m);
        }
        for (int m = 0; m < no; ++m) {
            flat(slot_offset(1, true) + m, col) = 0.5 * qo.D(m);
            flat(slot_offset(3, true) + m, col) = dsign * 0.5 * qo.D(m);
        }
    };
    for (int p = 0; p < ne; ++p) fill_left_column(ModeFamily::Even, p, slot_offset(0, false) + p);
    for (int p = 0; p < no; ++p) fill_left_column(ModeFamily::Odd, p, slot_offset(0, true) + p);

    // --- rotation relabeling for the other incidence directions --------------
    // One clockwise rotation carries channel content L->U->R->D->L; the flip
    // of the transverse coordinate negates odd (sine) modes entering D and U.
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(4 * nch, 4 * nch);
    const int rho[4] = {1, 2, 3, 0};  // new channel c' reads old channel rho[c']
    const bool flip[4] = {false, true, false, true}; // odd-mode sign flip into c'
    for (int cp = 0; cp < 4; ++cp) {
        const int c = rho[cp];
        for (int m = 0; m < ne; ++m) P(slot_offset(cp, false) + m, slot_offset(c, false) + m) = 1.0;
        for (int m = 0; m < no; ++m)
            P(slot_offset(cp, true) + m, slot_offset(c, true) + m) = flip[cp] ? -1.0 : 1.0;
    }
    // incidence chain L -> D -> R -> U; odd incident columns pick the flip sign
    const int chain[4] = {0, 3, 2, 1};
    for (int j = 1; j < 4; ++j) {
        const int prev = chain[j - 1], cur = chain[j];
        const double odd_sign = flip[cur] ? -1.0 : 1.0;
        flat.middleCols(slot_offset(cur, false), ne) =
            P * flat.middleCols(slot_offset(prev, false), ne);
        flat.middleCols(slot_offset(cur, true), no) =
            odd_sign * (P * flat.middleCols(slot_offset(prev, true), no));
    }

    // --- carve into blocks, forcing the forbidden ones to exact zero ---------
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const int r = slot_offset(i / 2, i % 2 == 1), c = slot_offset(j / 2, j % 2 == 1);
            if (detail::forbidden_block(i, j))
                S.blocks[i][j] = Eigen::MatrixXcd::Zero(S.slot_size(i), S.slot_size(j));
            else
                S.blocks[i][j] = flat.block(r, c, S.slot_size(i), S.slot_size(j));
        }
    return S;
}

/// Per-slot flux weights (even then odd modes of one channel).
inline Eigen::VectorXd channel_flux_weights(const SMatrix& S) {
    Eigen::VectorXd w(S.n_even + S.n_odd);
    for (int n = 0; n < S.n_even; ++n)
        w(n) = detail::flux_weight(ModeFamily::Even, n, S.geometry.a1, S.k);
    for (int n = 0; n < S.n_odd; ++n)
        w(S.n_even + n) = detail::flux_weight(ModeFamily::Odd, n, S.geometry.a1, S.k);
    return w;
}

/// Rescales entries by sqrt(w_out/w_in) so unit incoming flux maps to
/// outgoing flux amplitude; the lossless matrix becomes unitary and
/// reciprocity reads S = S^T.
inline SMatrix flux_normalize(const SMatrix& S) {
    if (S.normalization == Normalization::FluxNormalized)
        throw ValidationError("matrix is already flux-normalized");
    const Eigen::VectorXd w = channel_flux_weights(S);
    auto slot_weights = [&](int slot) {
        const int off = slot % 2 == 0 ? 0 : S.n_even;
        return w.segment(off, S.slot_size(slot));
    };
    SMatrix out = S;
    out.normalization = Normalization::FluxNormalized;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const Eigen::VectorXd wi = slot_weights(i);
            const Eigen::VectorXd wj = slot_weights(j);
            auto& B = out.blocks[i][j];
            for (int r = 0; r < B.rows(); ++r)
                for (int c = 0; c < B.cols(); ++c)
                    B(r, c) *= std::sqrt(wi(r) / wj(c)); // exactly 1 for equal fluxes
        }
    return out;
}

/// Incoming amplitudes for the four channels, each with an even and an odd
/// component.
struct WaveStack {
    std::array<Eigen::VectorXcd, 8> slots; ///< slot = 2*channel + (odd ? 1 : 0)
};

inline WaveStack zero_stack(const SMatrix& S) {
    WaveStack st;
    for (int i = 0; i < 8; ++i) st.slots[i] = Eigen::VectorXcd::Zero(S.slot_size(i));
    return st;
}

inline int wave_slot(Direction d, ModeFamily parity) {
    return 2 * static_cast<int>(d) + (parity == ModeFamily::Odd ? 1 : 0);
}

/// Assembles a stack from per-channel waves; unmentioned channels stay zero.
inline WaveStack make_stack(const SMatrix& S, const std::vector<ChannelWave>& waves) {
    WaveStack st = zero_stack(S);
    for (const ChannelWave& w : waves) {
        const int slot = wave_slot(w.direction, w.parity);
        if (w.amplitudes.size() != S.slot_size(slot))
            throw DimensionMismatch(std::string("wave for the ") + to_string(w.direction) +
                                    " channel has " + std::to_string(w.amplitudes.size()) +
                                    " amplitudes, expected " + std::to_string(S.slot_size(slot)));
        st.slots[slot] = w.amplitudes;
    }
    return st;
}

/// Block matrix-vector product b = S a.
inline WaveStack apply(const SMatrix& S, const WaveStack& incoming) {
    for (int j = 0; j < 8; ++j)
        if (incoming.slots[j].size() != S.slot_size(j))
            throw DimensionMismatch("incoming slot " + std::to_string(j) + " has size " +
                                    std::to_string(incoming.slots[j].size()) + ", expected " +
                                    std::to_string(S.slot_size(j)));
    WaveStack out = zero_stack(S);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) out.slots[i] += S.blocks[i][j] * incoming.slots[j];
    return out;
}

/// Rotates a wave stack by one quarter turn (the junction's symmetry):
/// channel content moves L->U->R->D->L with odd-mode sign flips where the
/// transverse coordinate reverses.
inline WaveStack rotate_stack(const SMatrix& S, const WaveStack& st) {
    WaveStack out = zero_stack(S);
    const int rho[4] = {1, 2, 3, 0};
    const bool flip[4] = {false, true, false, true};
    for (int cp = 0; cp < 4; ++cp) {
        out.slots[2 * cp] = st.slots[2 * rho[cp]];
        out.slots[2 * cp + 1] = (flip[cp] ? -1.0 : 1.0) * st.slots[2 * rho[cp] + 1];
    }
    return out;
}

} // namespace crossguide
