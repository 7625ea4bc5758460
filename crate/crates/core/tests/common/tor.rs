//! Brute-force Tor over F₂[U] by linear algebra.
//!
//! A module is a finite F₂ vector space (basis ≤ 64, vectors as bitmasks)
//! with a nilpotent U. The tower F[U^{-1}, U]/U·F[U] is represented by a
//! window of its lowest `K` elements. Tor_*(M, F[U]/U^m) is the homology of
//! `M --U^m--> M`, read off as Jordan types of U on the kernel and cokernel.

use hypcob::floer::HMModule;

#[derive(Clone, Debug)]
pub struct FiniteModule {
    /// Image of each basis vector under U.
    pub u: Vec<u64>,
    /// U-invariant subspace on which the cokernel is exact (the tower window
    /// minus its top elements, whose preimages fall outside the window).
    pub trusted: Vec<u64>,
}

impl FiniteModule {
    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn apply(&self, v: u64) -> u64 {
        let mut out = 0;
        let mut bits = v;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out ^= self.u[i];
            bits &= bits - 1;
        }
        out
    }

    pub fn apply_pow(&self, mut v: u64, k: u32) -> u64 {
        for _ in 0..k {
            v = self.apply(v);
        }
        v
    }
}

/// Echelon basis over F₂ keyed by leading bit.
#[derive(Default)]
struct Echelon {
    rows: Vec<u64>,
}

impl Echelon {
    fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            let lead = 63 - r.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let lead = 63 - v.leading_zeros();
        for r in &mut self.rows {
            if *r >> lead & 1 == 1 {
                *r ^= v;
            }
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }
}

fn rank(vs: impl IntoIterator<Item = u64>) -> usize {
    let mut e = Echelon::default();
    vs.into_iter().filter(|&v| e.insert(v)).count()
}

/// Kernel of a linear map given by the images of the basis vectors.
fn kernel(images: &[u64]) -> Vec<u64> {
    // eliminate on (image | coordinate) pairs; 64 + 64 bits
    let mut rows: Vec<(u64, u64)> = images.iter().enumerate().map(|(i, &im)| (im, 1u64 << i)).collect();
    let mut out = Vec::new();
    let mut pivots: Vec<(u64, u64)> = Vec::new();
    for row in rows.drain(..) {
        let (mut im, mut co) = row;
        for &(pi, pc) in &pivots {
            let lead = 63 - pi.leading_zeros();
            if im >> lead & 1 == 1 {
                im ^= pi;
                co ^= pc;
            }
        }
        if im == 0 {
            out.push(co);
        } else {
            let lead = 63 - im.leading_zeros();
            for p in &mut pivots {
                if p.0 >> lead & 1 == 1 {
                    p.0 ^= im;
                    p.1 ^= co;
                }
            }
            pivots.push((im, co));
        }
    }
    out
}

/// Block sizes from `r_j = rank U^j` on a space: #blocks of size ≥ j is r_{j-1} − r_j.
fn blocks_from_ranks(ranks: &[usize]) -> Vec<u32> {
    let mut out = Vec::new();
    for s in 1..ranks.len() {
        let at_least = ranks[s - 1] - ranks[s];
        let at_least_next = if s + 1 < ranks.len() { ranks[s] - ranks[s + 1] } else { 0 };
        for _ in 0..at_least - at_least_next {
            out.push(s as u32);
        }
    }
    out
}

/// Jordan type of U on Tor_0 and Tor_1 of `M` with `F[U]/U^m`.
pub fn tor_with_cyclic(m_mod: &FiniteModule, m: u32) -> (Vec<u32>, Vec<u32>) {
    let n = m_mod.dim();
    let images: Vec<u64> = (0..n).map(|i| m_mod.apply_pow(1 << i, m)).collect();
    let ker = kernel(&images);
    let ker_ranks: Vec<usize> = (0..=n).map(|j| rank(ker.iter().map(|&k| m_mod.apply_pow(k, j as u32)))).collect();
    let tor1 = blocks_from_ranks(&ker_ranks);
    // cokernel restricted to the trusted subspace, which contains the image
    let im_rank = rank(images.iter().copied());
    let coker_ranks: Vec<usize> = (0..=n)
        .map(|j| {
            let gens = m_mod.trusted.iter().map(|&s| m_mod.apply_pow(s, j as u32));
            rank(images.iter().copied().chain(gens)) - im_rank
        })
        .collect();
    let tor0 = blocks_from_ranks(&coker_ranks);
    (tor0, tor1)
}

/// Window of the tower (optional) plus the torsion summands.
pub fn finite_model(tower_window: Option<usize>, torsion: &[u32], max_resolved: u32) -> FiniteModule {
    let mut u = Vec::new();
    let mut trusted = Vec::new();
    if let Some(k) = tower_window {
        // e_0 is the bottom: U e_0 = 0, U e_i = e_{i-1}
        for i in 0..k {
            u.push(if i == 0 { 0 } else { 1u64 << (i - 1) });
            if i + (max_resolved as usize) < k {
                trusted.push(1u64 << i);
            }
        }
    }
    for &t in torsion {
        let base = u.len();
        // g, Ug, …, U^{t-1}g
        for j in 0..t as usize {
            u.push(if j + 1 < t as usize { 1u64 << (base + j + 1) } else { 0 });
            trusted.push(1u64 << (base + j));
        }
    }
    assert!(u.len() <= 64, "module too large for the bitmask oracle");
    FiniteModule { u, trusted }
}

/// Torsion of the connected sum via Künneth, each Tor computed by brute force.
/// Tor(tower, tower) is a tower and contributes no torsion.
pub fn connected_sum_torsion(a: &HMModule, b: &HMModule) -> Vec<u32> {
    let max_exp = a.torsion.iter().chain(&b.torsion).copied().max().unwrap_or(0);
    let window = 2 * max_exp as usize + 2;
    let mut out = Vec::new();
    // Tor(a, torsion of b), with a's tower as a window
    let full_a = finite_model(Some(window), &a.torsion, max_exp);
    for &m in &b.torsion {
        let (t0, t1) = tor_with_cyclic(&full_a, m);
        out.extend(t0);
        out.extend(t1);
    }
    // Tor(tower of b, torsion of a), by symmetry of Tor
    let tower = finite_model(Some(window), &[], max_exp);
    for &n in &a.torsion {
        let (t0, t1) = tor_with_cyclic(&tower, n);
        out.extend(t0);
        out.extend(t1);
    }
    out.sort_unstable();
    out
}

/// All multisets of size ≤ `max_len` with entries in `1..=max_exp`.
pub fn torsion_multisets(max_exp: u32, max_len: usize) -> Vec<Vec<u32>> {
    fn rec(start: u32, max_exp: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for e in start..=max_exp {
            cur.push(e);
            rec(e, max_exp, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, max_exp, max_len, &mut Vec::new(), &mut out);
    out
}
