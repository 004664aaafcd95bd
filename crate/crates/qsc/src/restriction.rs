//! Restriction maps to interval subdiagrams of the standard sequence: the
//! naive specialization `beta_J` (drop all variables with nodes outside `J`)
//! and the refined ring homomorphism `tau_J` into `Y(eps_J) ⊗ Z[Z_{j,b}^{±1}]`
//! whose `Z`-exponents are the inverse-Cartan coefficient tables `p_ij(k)`,
//! `p'_ij(k)`.
//!
//! Two placements of the tables over `±a q^k` are possible for the `Yt`
//! generators; they are kept behind [`YtTauConvention`]. The default
//! `EpsilonBased` places the swapped tables exactly on `Yt[M,..]` (the only
//! generator with an even-parity letter), which is the unique reading that
//! passes all three internal oracles at every interval: `tau(D)` carries no
//! `Z` part, `tau_{M}(Y[M-1,a] Yt[M+1,a]) = 1`, and multiplication by
//! `A^{-1}_{j,a}` commutes with `tau_J` for `j` in `J`. The alternative
//! `ByInterval` split (swap exactly on `i` in `J`) agrees with it whenever
//! `M` is in `J` and fails the `tau(D)` oracle otherwise.

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::{p_coeff_tables, CartanError, EpsilonSeq};
use crate::lweights::{Monomial, QChar, Spec, VarKey};
use crate::rank1::{sl2_char_monomials, sl2_decompose, u01_char_monomials, Lattice};

/// Node interval `{lo, .., hi}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn singleton(j: usize) -> Interval {
        Interval { lo: j, hi: j }
    }

    pub fn contains(&self, node: usize) -> bool {
        self.lo <= node && node <= self.hi
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    /// Never empty: `lo <= hi` by construction.
    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RestrictionError {
    BadInterval { lo: usize, hi: usize, nodes: usize },
    NonStandard,
    Cartan(CartanError),
}

impl fmt::Display for RestrictionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RestrictionError::BadInterval { lo, hi, nodes } => {
                write!(f, "interval {lo}..{hi} out of range 1..={nodes}")
            }
            RestrictionError::NonStandard => write!(f, "tau_J requires the standard epsilon"),
            RestrictionError::Cartan(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RestrictionError {}

impl From<CartanError> for RestrictionError {
    fn from(e: CartanError) -> Self {
        RestrictionError::Cartan(e)
    }
}

fn check_interval(eps: &EpsilonSeq, j: Interval) -> Result<(), RestrictionError> {
    if j.lo < 1 || j.hi > eps.nodes() || j.lo > j.hi {
        return Err(RestrictionError::BadInterval {
            lo: j.lo,
            hi: j.hi,
            nodes: eps.nodes(),
        });
    }
    Ok(())
}

/// The subdiagram sequence `eps_J = (eps_lo, .., eps_{hi+1})`.
pub fn restricted_eps(eps: &EpsilonSeq, j: Interval) -> Result<EpsilonSeq, RestrictionError> {
    check_interval(eps, j)?;
    Ok(eps.interval(j.lo, j.hi)?)
}

/// Naive restriction: keep the variables with nodes in `J` (relabelled to
/// `1..`), drop the rest; `D` survives iff `M` is in `J`.
pub fn beta(eps: &EpsilonSeq, j: Interval, m: &Monomial) -> Result<Monomial, RestrictionError> {
    check_interval(eps, j)?;
    let eps_j = restricted_eps(eps, j)?;
    let mm = eps.m();
    let mut out = Monomial::one();
    for (k, e) in m.exps() {
        match k {
            VarKey::Y(i, a) if j.contains(*i) => {
                out.mul_var(&eps_j, VarKey::Y(i - j.lo + 1, *a), *e)
                    .expect("relabelled Y node is valid");
            }
            VarKey::Yt(n, a) if j.contains(*n) => {
                out.mul_var(&eps_j, VarKey::Yt(n - j.lo + 1, *a), *e)
                    .expect("relabelled Yt node is valid");
            }
            VarKey::D if j.contains(mm) => {
                out.mul_var(&eps_j, VarKey::D, *e)
                    .expect("D valid when M in J");
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Placement of the `p`/`p'` tables in `tau(Yt[i,a])`; see the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum YtTauConvention {
    #[default]
    EpsilonBased,
    ByInterval,
}

/// A `Z`-variable `Z_{j,b}` with `j` outside the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZKey {
    pub node: usize,
    pub b: Spec,
}

/// Image of a monomial under `tau_J`: a canonical monomial over `eps_J`
/// times a `Z`-monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct RestrictedMonomial {
    pub inner: Monomial,
    pub z: BTreeMap<ZKey, i64>,
}

impl RestrictedMonomial {
    pub fn mul_inner(&self, m: &Monomial) -> RestrictedMonomial {
        RestrictedMonomial {
            inner: self.inner.mul(m),
            z: self.z.clone(),
        }
    }

    pub fn mul(&self, other: &RestrictedMonomial) -> RestrictedMonomial {
        let mut z = self.z.clone();
        for (k, e) in &other.z {
            let entry = z.entry(*k).or_insert(0);
            *entry += e;
            if *entry == 0 {
                z.remove(k);
            }
        }
        RestrictedMonomial {
            inner: self.inner.mul(&other.inner),
            z,
        }
    }

    pub fn z_is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn format_z(&self) -> String {
        if self.z.is_empty() {
            return "1".to_string();
        }
        self.z
            .iter()
            .map(|(k, e)| {
                let head = format!("Z[{},{}]", k.node, k.b);
                if *e == 1 {
                    head
                } else {
                    format!("{head}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn add_z(z: &mut BTreeMap<ZKey, i64>, key: ZKey, e: i64) {
    if e == 0 {
        return;
    }
    let entry = z.entry(key).or_insert(0);
    *entry += e;
    if *entry == 0 {
        z.remove(&key);
    }
}

struct TauContext<'a> {
    eps: &'a EpsilonSeq,
    eps_j: EpsilonSeq,
    j: Interval,
    convention: YtTauConvention,
}

impl<'a> TauContext<'a> {
    fn new(
        eps: &'a EpsilonSeq,
        j: Interval,
        convention: YtTauConvention,
    ) -> Result<Self, RestrictionError> {
        if !eps.is_standard() || eps.m() == 0 || eps.n1() == 0 {
            return Err(RestrictionError::NonStandard);
        }
        check_interval(eps, j)?;
        Ok(TauContext {
            eps,
            eps_j: restricted_eps(eps, j)?,
            j,
            convention,
        })
    }

    fn outside(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.eps.nodes()).filter(move |n| !self.j.contains(*n))
    }

    /// Z-part of a generator with node `i` and parameter `a`.
    ///
    /// `swap = false` places `p` at `a q^k` and `p'` at `-a q^k` (scaled by
    /// `scale`); `swap = true` exchanges the two tables.
    fn z_part(
        &self,
        out: &mut BTreeMap<ZKey, i64>,
        i: usize,
        a: Spec,
        scale: i64,
        swap: bool,
    ) -> Result<(), RestrictionError> {
        for jn in self.outside() {
            let (p, pp) = p_coeff_tables(self.eps.m(), self.eps.n1(), i, jn)?;
            let (at_pos, at_neg) = if swap { (&pp, &p) } else { (&p, &pp) };
            for (k, c) in at_pos {
                add_z(
                    out,
                    ZKey {
                        node: jn,
                        b: a.mul_q(*k),
                    },
                    c * scale,
                );
            }
            for (k, c) in at_neg {
                add_z(
                    out,
                    ZKey {
                        node: jn,
                        b: a.neg().mul_q(*k),
                    },
                    c * scale,
                );
            }
        }
        Ok(())
    }

    fn yt_swap(&self, i: usize) -> bool {
        match self.convention {
            // Swap exactly on the node whose letter is even: i = M.
            YtTauConvention::EpsilonBased => i == self.eps.m(),
            YtTauConvention::ByInterval => self.j.contains(i),
        }
    }

    /// Image of the ambient generator `Yt[M, a]` (not a canonical key).
    fn tau_yt_m(&self, a: Spec, e: i64) -> Result<RestrictedMonomial, RestrictionError> {
        let m = self.eps.m();
        let mut inner = Monomial::one();
        if self.j.contains(m) {
            inner
                .mul_var(&self.eps_j, VarKey::Yt(m - self.j.lo + 1, a), e)
                .expect("Yt at relabelled node M canonicalizes");
        }
        let mut z = BTreeMap::new();
        self.z_part(&mut z, m, a, -e, self.yt_swap(m))?;
        Ok(RestrictedMonomial { inner, z })
    }

    fn tau_monomial(&self, mono: &Monomial) -> Result<RestrictedMonomial, RestrictionError> {
        let m = self.eps.m();
        let mut inner = Monomial::one();
        let mut z = BTreeMap::new();
        for (k, e) in mono.exps() {
            match k {
                VarKey::Y(i, a) => {
                    if self.j.contains(*i) {
                        inner
                            .mul_var(&self.eps_j, VarKey::Y(i - self.j.lo + 1, *a), *e)
                            .expect("relabelled Y node is valid");
                    }
                    self.z_part(&mut z, *i, *a, *e, false)?;
                }
                VarKey::Yt(i, a) => {
                    if self.j.contains(*i) {
                        inner
                            .mul_var(&self.eps_j, VarKey::Yt(i - self.j.lo + 1, *a), *e)
                            .expect("relabelled Yt node is valid");
                    }
                    self.z_part(&mut z, *i, *a, -e, self.yt_swap(*i))?;
                }
                VarKey::D => match self.convention {
                    // tau(D) has an empty Z part; the head survives iff M in J.
                    YtTauConvention::EpsilonBased => {
                        if self.j.contains(m) {
                            inner.mul_var(&self.eps_j, VarKey::D, *e).expect("D valid");
                        }
                    }
                    // Interval-based reading: route through the relation
                    // D = Y[M,a0] Yt[M,-a0] at a fixed a0 (the image depends
                    // on a0 when M is outside J, which is what the oracle
                    // tests expose).
                    YtTauConvention::ByInterval => {
                        let a0 = Spec::one();
                        if self.j.contains(m) {
                            inner.mul_var(&self.eps_j, VarKey::D, *e).expect("D valid");
                        }
                        self.z_part(&mut z, m, a0, *e, false)?;
                        let ytm = self.tau_yt_m(a0.neg(), *e)?;
                        for (zk, ze) in &ytm.z {
                            add_z(&mut z, *zk, *ze);
                        }
                    }
                },
            }
        }
        Ok(RestrictedMonomial { inner, z })
    }
}

/// The refined restriction homomorphism on a canonical monomial.
pub fn tau(
    eps: &EpsilonSeq,
    j: Interval,
    m: &Monomial,
    convention: YtTauConvention,
) -> Result<RestrictedMonomial, RestrictionError> {
    TauContext::new(eps, j, convention)?.tau_monomial(m)
}

/// Image of the ambient generator `Yt[M,a]^e` under `tau_J`; used by the
/// well-definedness oracle `tau(Y[M,a]) tau(Yt[M,-a]) = tau(D)`.
pub fn tau_yt_m(
    eps: &EpsilonSeq,
    j: Interval,
    a: Spec,
    e: i64,
    convention: YtTauConvention,
) -> Result<RestrictedMonomial, RestrictionError> {
    TauContext::new(eps, j, convention)?.tau_yt_m(a, e)
}

/// `tau_J` applied to a whole q-character.
pub fn tau_qchar(
    eps: &EpsilonSeq,
    j: Interval,
    chi: &QChar,
    convention: YtTauConvention,
) -> Result<Vec<(RestrictedMonomial, u64)>, RestrictionError> {
    let ctx = TauContext::new(eps, j, convention)?;
    chi.terms()
        .map(|(m, c)| Ok((ctx.tau_monomial(m)?, *c)))
        .collect()
}

/// Partition a `tau`-image by its `Z`-monomial: returns pairwise distinct
/// `Z`-monomials with the inner characters collected over them.
pub fn group_by_z(image: &[(RestrictedMonomial, u64)]) -> Vec<(QChar, BTreeMap<ZKey, i64>)> {
    let mut groups: BTreeMap<BTreeMap<ZKey, i64>, QChar> = BTreeMap::new();
    for (rm, c) in image {
        groups
            .entry(rm.z.clone())
            .or_insert_with(QChar::zero)
            .add_term(rm.inner.clone(), *c);
    }
    groups.into_iter().map(|(z, chi)| (chi, z)).collect()
}

/// Check that a group's inner part is a nonnegative sum of simple characters
/// of the rank-1 theory of a single restricted node (`sl2` ladders for the
/// even/odd lattices). Greedy: repeatedly subtract the oracle character of a
/// maximal-degree monomial, which must be dominant.
pub fn is_sl2_character_sum(chi: &QChar, lattice: Lattice) -> bool {
    let mut rem: BTreeMap<BTreeMap<Spec, i64>, i64> = BTreeMap::new();
    for (m, c) in chi.terms() {
        let mut exps = BTreeMap::new();
        for (k, e) in m.exps() {
            match k {
                VarKey::Y(1, a) | VarKey::Yt(1, a) => {
                    exps.insert(*a, *e);
                }
                _ => return false,
            }
        }
        rem.insert(exps, *c as i64);
    }
    loop {
        rem.retain(|_, c| *c != 0);
        let head = match rem
            .iter()
            .max_by_key(|(m, _)| (m.values().sum::<i64>(), (*m).clone()))
        {
            None => return true,
            Some((m, c)) => {
                if *c < 0 {
                    return false;
                }
                (m.clone(), *c)
            }
        };
        let strings = match sl2_decompose(&head.0, lattice) {
            Ok(s) => s,
            Err(_) => return false,
        };
        for (m, c) in sl2_char_monomials(&strings) {
            *rem.entry(m).or_insert(0) -= head.1 * c as i64;
        }
    }
}

/// Same decomposition check against the `(01)` oracle for groups at `J={M}`
/// (inner ring `eps_J = (0,1)`: variables `Y[1,..]` and `D`).
pub fn is_u01_character_sum(chi: &QChar) -> bool {
    let mut rem: BTreeMap<(BTreeMap<Spec, i64>, i64), i64> = BTreeMap::new();
    for (m, c) in chi.terms() {
        let mut exps = BTreeMap::new();
        let mut d = 0i64;
        for (k, e) in m.exps() {
            match k {
                VarKey::Y(1, a) => {
                    exps.insert(*a, *e);
                }
                VarKey::D => d = *e,
                _ => return false,
            }
        }
        rem.insert((exps, d), *c as i64);
    }
    loop {
        rem.retain(|_, c| *c != 0);
        let ((y, d), c) = match rem.iter().next_back() {
            None => return true,
            Some((k, c)) => (k.clone(), *c),
        };
        if c < 0 {
            return false;
        }
        for ((dd, yy), cc) in u01_char_monomials(d, &y) {
            *rem.entry((yy, dd)).or_insert(0) -= c * cc as i64;
        }
    }
}
