//! Matrix-product-state backend.
//!
//! States are stored as a chain of site tensors (left bond, physical, right
//! bond) in mixed-canonical form around a moving orthogonality centre. One
//! term exponential is a five-site operator — diagonal on the four
//! neighbours, a rotation on the flipped site — applied by contracting the
//! five-site window around the flip, rotating the gate-enabled components,
//! and re-factorizing the window with four truncated singular-value
//! decompositions.
//!
//! Truncation keeps at most `bond_cap` singular values per bond and drops
//! values below `threshold` relative to the largest; the kept block is
//! renormalized to unit norm and the discarded squared weight accumulates in
//! a ledger, so truncation error stays auditable while the reported norm is
//! exactly one.
//!
//! The same five-site operator is also exposed in tensor-train form
//! ([`TermGate::train_tensor`], internal bond dimensions 2, 3, 3, 2): a
//! neighbour-count register enters from each side and selects either the
//! identity or the rotation on the centre site. Contracting the train
//! reproduces the dense 32 x 32 propagator exactly, which the tests pin
//! against the state-vector backend.

use faer::prelude::*;
use num_complex::Complex64;

use crate::dense::{DenseState, MAX_STATE_VECTOR_SITES};
use crate::error::{Error, Result};
use crate::lattice::{build_terms, sublattice_partition, ClassicalConfig, HamTerm, LatticeSpec};
use crate::observables::{BackendKind, Diagnostics, TrajectoryRecord, TruncationSeries};
use crate::splitting::{merged_schedule, EvolutionParams};

/// Default bond-dimension cap.
pub const DEFAULT_BOND_CAP: usize = 30;
/// Default relative singular-value cutoff.
pub const DEFAULT_TRUNCATION_THRESHOLD: f64 = 1e-10;

/// One site tensor with bonds (left, physical = 2, right), stored row-major
/// as `data[(a * 2 + p) * r + b]`.
#[derive(Debug, Clone)]
struct SiteTensor {
    l: usize,
    r: usize,
    data: Vec<Complex64>,
}

impl SiteTensor {
    fn zeros(l: usize, r: usize) -> Self {
        Self {
            l,
            r,
            data: vec![Complex64::ZERO; l * 2 * r],
        }
    }

    #[inline]
    fn at(&self, a: usize, p: usize, b: usize) -> Complex64 {
        self.data[(a * 2 + p) * self.r + b]
    }

    #[inline]
    fn at_mut(&mut self, a: usize, p: usize, b: usize) -> &mut Complex64 {
        &mut self.data[(a * 2 + p) * self.r + b]
    }

    /// Unfolding with rows (left, physical) and columns (right).
    fn unfold_left(&self) -> Mat<c64> {
        Mat::from_fn(self.l * 2, self.r, |i, j| self.data[i * self.r + j])
    }

    /// Unfolding with rows (left) and columns (physical, right).
    fn unfold_right(&self) -> Mat<c64> {
        Mat::from_fn(self.l, 2 * self.r, |i, j| self.data[i * 2 * self.r + j])
    }

    fn from_unfold_left(m: &Mat<c64>, l: usize, r: usize) -> Self {
        debug_assert_eq!(m.nrows(), l * 2);
        debug_assert_eq!(m.ncols(), r);
        let mut t = Self::zeros(l, r);
        for i in 0..l * 2 {
            for j in 0..r {
                t.data[i * r + j] = m[(i, j)];
            }
        }
        t
    }

    fn from_unfold_right(m: &Mat<c64>, l: usize, r: usize) -> Self {
        debug_assert_eq!(m.nrows(), l);
        debug_assert_eq!(m.ncols(), 2 * r);
        let mut t = Self::zeros(l, r);
        for i in 0..l {
            for j in 0..2 * r {
                t.data[i * 2 * r + j] = m[(i, j)];
            }
        }
        t
    }

    fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// A matrix-product state in mixed-canonical form.
#[derive(Debug, Clone)]
pub struct MpsState {
    sites: usize,
    tensors: Vec<SiteTensor>,
    center: usize,
    bond_cap: usize,
    threshold: f64,
    cumulative_discarded: f64,
    max_bond_seen: usize,
}

impl MpsState {
    /// Product state for a classical configuration (all bonds trivial).
    pub fn from_config(config: &ClassicalConfig, bond_cap: usize, threshold: f64) -> Result<Self> {
        let lattice = LatticeSpec::new(config.len())?;
        if bond_cap == 0 {
            return Err(Error::InvalidParams("bond cap must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&threshold) {
            return Err(Error::InvalidParams(format!(
                "truncation threshold must lie in [0, 1), got {threshold}"
            )));
        }
        let tensors = (1..=lattice.sites())
            .map(|site| {
                let mut t = SiteTensor::zeros(1, 1);
                *t.at_mut(0, config.bit(site) as usize, 0) = Complex64::ONE;
                t
            })
            .collect();
        Ok(Self {
            sites: lattice.sites(),
            tensors,
            center: 0,
            bond_cap,
            threshold,
            cumulative_discarded: 0.0,
            max_bond_seen: 1,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn bond_cap(&self) -> usize {
        self.bond_cap
    }

    pub fn center(&self) -> usize {
        self.center
    }

    /// Dimensions of the L-1 internal bonds.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.tensors[..self.sites - 1].iter().map(|t| t.r).collect()
    }

    /// Largest bond dimension reached so far.
    pub fn max_bond_seen(&self) -> usize {
        self.max_bond_seen
    }

    /// Cumulative discarded squared Schmidt weight.
    pub fn cumulative_discarded(&self) -> f64 {
        self.cumulative_discarded
    }

    /// Norm of the state (unity up to rounding, by construction).
    pub fn norm(&self) -> f64 {
        self.tensors[self.center].norm_sqr().sqrt()
    }

    /// Occupation probability of the centre site.
    fn population_at_center(&self) -> f64 {
        let t = &self.tensors[self.center];
        let mut live = 0.0;
        for a in 0..t.l {
            for b in 0..t.r {
                live += t.at(a, 1, b).norm_sqr();
            }
        }
        live
    }

    /// All site populations, measured by sweeping the centre from the right
    /// end to the left end (the centre finishes at site 0).
    pub fn populations(&mut self) -> Vec<f64> {
        self.move_center_to(self.sites - 1);
        let mut pops = vec![0.0; self.sites];
        pops[self.sites - 1] = self.population_at_center();
        for site in (0..self.sites - 1).rev() {
            self.move_center_left();
            pops[site] = self.population_at_center();
        }
        pops
    }

    fn move_center_right(&mut self) {
        let c = self.center;
        debug_assert!(c + 1 < self.sites);
        let t = &self.tensors[c];
        let l = t.l;
        let qr = t.unfold_left().qr();
        let q = qr.compute_thin_Q();
        let rr = qr.thin_R().to_owned();
        let k = q.ncols();
        self.tensors[c] = SiteTensor::from_unfold_left(&q, l, k);
        let next = &self.tensors[c + 1];
        let merged = &rr * next.unfold_right();
        self.tensors[c + 1] = SiteTensor::from_unfold_right(&merged, k, next.r);
        self.center = c + 1;
    }

    fn move_center_left(&mut self) {
        let c = self.center;
        debug_assert!(c > 0);
        let t = &self.tensors[c];
        let r = t.r;
        // LQ factorization via QR of the adjoint: M = L Q with Q row-orthonormal.
        let adj = t.unfold_right().adjoint().to_owned();
        let qr = adj.qr();
        let q = qr.compute_thin_Q();
        let rr = qr.thin_R().to_owned();
        let k = q.ncols();
        let q_part = q.adjoint().to_owned(); // (k, 2r), right-canonical
        let l_part = rr.adjoint().to_owned(); // (l, k)
        self.tensors[c] = SiteTensor::from_unfold_right(&q_part, k, r);
        let prev = &self.tensors[c - 1];
        let merged = prev.unfold_left() * &l_part;
        self.tensors[c - 1] = SiteTensor::from_unfold_left(&merged, prev.l, k);
        self.center = c - 1;
    }

    /// Moves the orthogonality centre to `site`.
    pub fn move_center_to(&mut self, site: usize) {
        debug_assert!(site < self.sites);
        while self.center < site {
            self.move_center_right();
        }
        while self.center > site {
            self.move_center_left();
        }
    }

    /// Contracts the full chain into a dense state (small chains only).
    pub fn to_dense(&self) -> Result<DenseState> {
        if self.sites > MAX_STATE_VECTOR_SITES {
            return Err(Error::StateVectorCapacity {
                sites: self.sites,
                cap: MAX_STATE_VECTOR_SITES,
            });
        }
        // partial[prefix_index * bond + b], growing site by site; site k
        // contributes bit k of the basis index.
        let mut bond = self.tensors[0].l; // = 1
        let mut partial = vec![Complex64::ONE; bond];
        for (k, t) in self.tensors.iter().enumerate() {
            let prefixes = 1usize << k;
            let mut next = vec![Complex64::ZERO; prefixes * 2 * t.r];
            for pre in 0..prefixes {
                for p in 0..2 {
                    let out_pre = pre | (p << k);
                    for b in 0..t.r {
                        let mut acc = Complex64::ZERO;
                        for a in 0..t.l {
                            acc += partial[pre * bond + a] * t.at(a, p, b);
                        }
                        next[out_pre * t.r + b] = acc;
                    }
                }
            }
            bond = t.r;
            partial = next;
        }
        debug_assert_eq!(bond, 1);
        DenseState::from_amplitudes(self.sites, partial)
    }

    /// Energy expectation over all flip terms, evaluated with
    /// neighbour-count-resolved environments while the centre sweeps the
    /// interior left to right.
    pub fn energy(&mut self, terms: &[HamTerm]) -> f64 {
        let mut total = 0.0;
        for term in terms {
            let f = term.flip_site() - 1;
            self.move_center_to(f);
            total += self.term_energy(f);
        }
        total
    }

    /// <psi| flip term at centre site `f` |psi>, with the centre already at `f`.
    fn term_energy(&self, f: usize) -> f64 {
        // Count-resolved left environments over sites f-2, f-1 (left-canonical).
        let left = count_resolved_left(&self.tensors[f - 2], &self.tensors[f - 1]);
        // Count-resolved right environments over sites f+1, f+2 (right-canonical).
        let right = count_resolved_right(&self.tensors[f + 1], &self.tensors[f + 2]);
        let m = &self.tensors[f];
        let mut value = Complex64::ZERO;
        for (c1, left_env) in left.iter().enumerate() {
            // N[y', y] = sum_p conj(M[x', 1-p, y']) L[x', x] M[x, p, y]
            let mut n = Mat::<c64>::zeros(m.r, m.r);
            for p in 0..2usize {
                let slice_in = Mat::from_fn(m.l, m.r, |x, y| m.at(x, p, y));
                let slice_out = Mat::from_fn(m.l, m.r, |x, y| m.at(x, 1 - p, y));
                let prod = slice_out.adjoint() * left_env * slice_in;
                n += prod;
            }
            for (c2, right_env) in right.iter().enumerate() {
                let count = c1 + c2;
                if count == 2 || count == 3 {
                    let mut acc = Complex64::ZERO;
                    for yp in 0..m.r {
                        for y in 0..m.r {
                            acc += n[(yp, y)] * right_env[(yp, y)].conj();
                        }
                    }
                    value += acc;
                }
            }
        }
        value.re
    }
}

/// L[c][x', x] for c live sites among the two left neighbours, assuming the
/// identity environment to their left (they are left-canonical).
fn count_resolved_left(outer: &SiteTensor, inner: &SiteTensor) -> [Mat<c64>; 3] {
    // Transfer of the outer site, resolved by its occupation.
    let g: Vec<Mat<c64>> = (0..2)
        .map(|p| {
            let slice = Mat::from_fn(outer.l, outer.r, |a, b| outer.at(a, p, b));
            slice.adjoint() * &slice
        })
        .collect();
    let mut envs = [(); 3].map(|_| Mat::<c64>::zeros(inner.r, inner.r));
    for pa in 0..2usize {
        for pb in 0..2usize {
            let slice = Mat::from_fn(inner.l, inner.r, |a, b| inner.at(a, pb, b));
            envs[pa + pb] += slice.adjoint() * &g[pa] * slice;
        }
    }
    envs
}

/// R[c][y', y] for c live sites among the two right neighbours, assuming the
/// identity environment to their right (they are right-canonical).
fn count_resolved_right(inner: &SiteTensor, outer: &SiteTensor) -> [Mat<c64>; 3] {
    let g: Vec<Mat<c64>> = (0..2)
        .map(|p| {
            let slice = Mat::from_fn(outer.l, outer.r, |a, b| outer.at(a, p, b));
            &slice * slice.adjoint()
        })
        .collect();
    let mut envs = [(); 3].map(|_| Mat::<c64>::zeros(inner.l, inner.l));
    for pd in 0..2usize {
        for pc in 0..2usize {
            let slice = Mat::from_fn(inner.l, inner.r, |a, b| inner.at(a, pc, b));
            envs[pc + pd] += &slice * &g[pd] * slice.adjoint();
        }
    }
    envs
}

/// The five-site propagator exp(-i theta h) of one flip term.
///
/// Held both as a tensor train (bond dimensions 1, 2, 3, 3, 2, 1: a
/// neighbour-count register flows in from each side and selects identity or
/// rotation at the centre) and as the list of gate-enabled components used
/// by the fast apply path. Both views describe the same operator;
/// [`TermGate::contract_dense`] pins them together in the tests.
#[derive(Debug, Clone)]
pub struct TermGate {
    flip_site: usize,
    theta: f64,
    /// train[k]: (wl, 2, 2, wr) as data[((wl_idx * 2 + p_out) * 2 + p_in) * wr + wr_idx].
    train: [GateTensor; 5],
}

#[derive(Debug, Clone)]
struct GateTensor {
    wl: usize,
    wr: usize,
    data: Vec<Complex64>,
}

impl GateTensor {
    fn zeros(wl: usize, wr: usize) -> Self {
        Self {
            wl,
            wr,
            data: vec![Complex64::ZERO; wl * 2 * 2 * wr],
        }
    }

    #[inline]
    fn at_mut(&mut self, w: usize, p_out: usize, p_in: usize, v: usize) -> &mut Complex64 {
        debug_assert!(w < self.wl && v < self.wr);
        &mut self.data[((w * 2 + p_out) * 2 + p_in) * self.wr + v]
    }

    #[inline]
    fn at(&self, w: usize, p_out: usize, p_in: usize, v: usize) -> Complex64 {
        self.data[((w * 2 + p_out) * 2 + p_in) * self.wr + v]
    }
}

/// Whether a neighbour count enables the flip.
#[inline]
fn count_enables(count: usize) -> bool {
    count == 2 || count == 3
}

/// Builds the five-site propagator of `term` at angle `theta`.
pub fn term_propagator(term: &HamTerm, theta: f64) -> TermGate {
    let cos = Complex64::new(theta.cos(), 0.0);
    let misin = Complex64::new(0.0, -theta.sin());

    // Outer tensors copy the occupation onto the count register.
    let mut w0 = GateTensor::zeros(1, 2);
    for p in 0..2 {
        *w0.at_mut(0, p, p, p) = Complex64::ONE;
    }
    let mut w1 = GateTensor::zeros(2, 3);
    for k1 in 0..2 {
        for p in 0..2 {
            *w1.at_mut(k1, p, p, k1 + p) = Complex64::ONE;
        }
    }
    // Centre: rotation wherever the total count enables the flip.
    let mut w2 = GateTensor::zeros(3, 3);
    for c_left in 0..3 {
        for c_right in 0..3 {
            if count_enables(c_left + c_right) {
                for p in 0..2 {
                    *w2.at_mut(c_left, p, p, c_right) = cos;
                    *w2.at_mut(c_left, 1 - p, p, c_right) = misin;
                }
            } else {
                for p in 0..2 {
                    *w2.at_mut(c_left, p, p, c_right) = Complex64::ONE;
                }
            }
        }
    }
    let mut w3 = GateTensor::zeros(3, 2);
    for k2 in 0..2 {
        for p in 0..2 {
            *w3.at_mut(p + k2, p, p, k2) = Complex64::ONE;
        }
    }
    let mut w4 = GateTensor::zeros(2, 1);
    for p in 0..2 {
        *w4.at_mut(p, p, p, 0) = Complex64::ONE;
    }

    TermGate {
        flip_site: term.flip_site(),
        theta,
        train: [w0, w1, w2, w3, w4],
    }
}

impl TermGate {
    pub fn flip_site(&self) -> usize {
        self.flip_site
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Internal bond dimensions of the tensor train.
    pub fn train_bond_dims(&self) -> [usize; 4] {
        [
            self.train[0].wr,
            self.train[1].wr,
            self.train[2].wr,
            self.train[3].wr,
        ]
    }

    /// Contracts the train into the dense 32 x 32 window propagator.
    ///
    /// Index convention matches the state-vector backend: window site k
    /// (k = 0 is the leftmost, the flip site is k = 2) contributes bit k of
    /// the basis index. Row-major `matrix[out * 32 + in]`.
    pub fn contract_dense(&self) -> Vec<Complex64> {
        let mut matrix = vec![Complex64::ZERO; 32 * 32];
        for q_out in 0..32usize {
            for q_in in 0..32usize {
                // Sum over the internal count registers.
                let mut paths: Vec<(usize, Complex64)> = vec![(0, Complex64::ONE)];
                for (k, w) in self.train.iter().enumerate() {
                    let p_out = (q_out >> k) & 1;
                    let p_in = (q_in >> k) & 1;
                    let mut next: Vec<(usize, Complex64)> = Vec::new();
                    for &(wl, amp) in &paths {
                        for v in 0..w.wr {
                            let factor = w.at(wl, p_out, p_in, v);
                            if factor != Complex64::ZERO {
                                next.push((v, amp * factor));
                            }
                        }
                    }
                    paths = next;
                    if paths.is_empty() {
                        break;
                    }
                }
                let amp: Complex64 = paths.into_iter().map(|(_, a)| a).sum();
                matrix[q_out * 32 + q_in] = amp;
            }
        }
        matrix
    }
}

/// Applies a five-site term propagator and re-compresses the window.
///
/// The window (flip site +/- 2) is contracted against the chain's canonical
/// environment, the gate rotates the enabled components in place, and four
/// truncated SVDs re-factorize the window left to right, leaving the centre
/// on the window's right edge. Truncation follows the state's bond cap and
/// relative threshold; the discarded weight lands in the state's ledger.
pub fn apply_and_compress(state: &mut MpsState, gate: &TermGate) -> Result<()> {
    let sites = state.sites;
    if gate.flip_site < 3 || gate.flip_site + 2 > sites {
        return Err(Error::FlipSiteOutOfRange {
            site: gate.flip_site,
            max: sites.saturating_sub(2),
            sites,
        });
    }
    let w0 = gate.flip_site - 3; // 0-based index of the leftmost window site
    if state.center < w0 {
        state.move_center_to(w0);
    } else if state.center > w0 + 4 {
        state.move_center_to(w0 + 4);
    }

    // Contract the window into rows (left bond, p0..p4 with p4 fastest) and
    // columns (right bond).
    let l0 = state.tensors[w0].l;
    let mut theta = state.tensors[w0].unfold_left(); // (l0*2, r)
    for k in 1..5 {
        let t = &state.tensors[w0 + k];
        let wide = theta * t.unfold_right(); // (rows, 2 * r_k)
        let rows = wide.nrows();
        let r_k = t.r;
        theta = Mat::from_fn(rows * 2, r_k, |i, j| wide[(i / 2, (i % 2) * r_k + j)]);
    }
    let r4 = state.tensors[w0 + 4].r;
    debug_assert_eq!(theta.nrows(), l0 * 32);
    debug_assert_eq!(theta.ncols(), r4);

    // Rotate the gate-enabled components. With p4 fastest, window site k sits
    // at bit 4 - k of the row's physical part: the centre is bit 2 and the
    // neighbours are bits 0, 1, 3, 4.
    let cos = Complex64::new(gate.theta.cos(), 0.0);
    let misin = Complex64::new(0.0, -gate.theta.sin());
    const CENTRE_BIT: usize = 2;
    const NEIGHBOR_MASK: usize = 0b11011;
    for a in 0..l0 {
        for q0 in 0..32usize {
            if q0 & (1 << CENTRE_BIT) != 0 {
                continue;
            }
            if !count_enables((q0 & NEIGHBOR_MASK).count_ones() as usize) {
                continue;
            }
            let q1 = q0 | (1 << CENTRE_BIT);
            let (row0, row1) = (a * 32 + q0, a * 32 + q1);
            for col in 0..r4 {
                let x0 = theta[(row0, col)];
                let x1 = theta[(row1, col)];
                theta[(row0, col)] = cos * x0 + misin * x1;
                theta[(row1, col)] = misin * x0 + cos * x1;
            }
        }
    }

    // Re-factorize: four truncated SVDs, sweeping left to right. The carry
    // is kept as (left bond) x (remaining physical bits, right bond), with
    // the leftmost remaining site slowest among the physical bits.
    let mut left_dim = l0;
    let mut phys_left = 32usize; // physical dimension not yet split off
    let mut current = Mat::from_fn(l0, 32 * r4, |a, j| theta[(a * 32 + j / r4, j % r4)]);
    for k in 0..4 {
        // Split off one site: rows (left_dim, p), columns (q_rest, b).
        let rows = left_dim * 2;
        let cols = (phys_left / 2) * r4;
        let m = Mat::from_fn(rows, cols, |i, j| {
            let (a, p) = (i / 2, i % 2);
            let (q_rest, b) = (j / r4, j % r4);
            current[(a, (p * (phys_left / 2) + q_rest) * r4 + b)]
        });
        let svd = m.thin_svd().map_err(|e| Error::SvdFailure(format!("{e:?}")))?;
        let s = svd.S();
        let rank = rows.min(cols);
        let total: f64 = (0..rank).map(|i| s[i].re * s[i].re).sum();
        let cutoff = s[0].re * state.threshold;
        let mut keep = 0;
        while keep < rank && keep < state.bond_cap && s[keep].re > cutoff {
            keep += 1;
        }
        let keep = keep.max(1);
        let kept: f64 = (0..keep).map(|i| s[i].re * s[i].re).sum();
        let discarded = if total > 0.0 { (total - kept) / total } else { 0.0 };
        state.cumulative_discarded += discarded;
        state.max_bond_seen = state.max_bond_seen.max(keep);
        let scale = 1.0 / kept.sqrt();

        let u = svd.U();
        let tensor = Mat::from_fn(left_dim * 2, keep, |i, j| u[(i, j)]);
        state.tensors[w0 + k] = SiteTensor::from_unfold_left(&tensor, left_dim, keep);

        let v = svd.V();
        // carry = scaled S V^H, rows keep, cols (q_rest, b).
        current = Mat::from_fn(keep, cols, |i, j| {
            Complex64::from(s[i]) * scale * v[(j, i)].conj()
        });
        left_dim = keep;
        phys_left /= 2;
    }
    debug_assert_eq!(phys_left, 2);
    state.tensors[w0 + 4] = SiteTensor::from_unfold_right(
        &Mat::from_fn(left_dim, 2 * r4, |i, j| current[(i, j)]),
        left_dim,
        r4,
    );
    state.center = w0 + 4;
    Ok(())
}

/// Split-step evolution on a matrix-product state, sampling populations,
/// norm, energy, and the truncation ledger on the same grid as the
/// state-vector backend.
pub fn evolve(
    initial: &ClassicalConfig,
    params: &EvolutionParams,
    bond_cap: usize,
    threshold: f64,
) -> Result<TrajectoryRecord> {
    params.validate()?;
    let lattice = LatticeSpec::new(initial.len())?;
    let terms = build_terms(lattice);
    let groups = sublattice_partition(&terms);
    let (steps_per_sample, blocks) = params.sampling_grid();
    let schedule = merged_schedule(params.order, steps_per_sample);
    let block_time = steps_per_sample as f64 * params.dt;

    // One gate list per stage, reused every block.
    let stage_gates: Vec<Vec<TermGate>> = schedule
        .iter()
        .map(|stage| {
            groups[stage.group]
                .iter()
                .map(|term| term_propagator(term, stage.weight * params.dt))
                .collect()
        })
        .collect();

    let mut state = MpsState::from_config(initial, bond_cap, threshold)?;

    let mut times = Vec::with_capacity(blocks + 1);
    let mut populations = Vec::with_capacity(blocks + 1);
    let mut norms = Vec::with_capacity(blocks + 1);
    let mut energies = Vec::with_capacity(blocks + 1);
    let mut truncation = TruncationSeries::default();
    let mut sample = |state: &mut MpsState, t: f64| {
        times.push(t);
        energies.push(state.energy(&terms));
        populations.push(state.populations());
        norms.push(state.norm());
        truncation.cumulative_discarded.push(state.cumulative_discarded());
        truncation.max_bond.push(state.max_bond_seen());
    };

    sample(&mut state, 0.0);
    for block in 1..=blocks {
        for gates in &stage_gates {
            for gate in gates {
                apply_and_compress(&mut state, gate)?;
            }
        }
        sample(&mut state, block as f64 * block_time);
    }

    let diagnostics = Diagnostics {
        norms,
        energies,
        truncation: Some(truncation),
    };
    Ok(TrajectoryRecord::build(
        BackendKind::TensorNetwork,
        lattice.sites(),
        times,
        populations,
        diagnostics,
        params.generation_time,
    ))
}
