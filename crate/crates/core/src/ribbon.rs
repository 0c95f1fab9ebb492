//! Rational ribbons described by their gluing class.
//!
//! A ribbon of genus `g` over `P^1` is glued from `Spec k[s, eps]/eps^2` and
//! `Spec k[t, eta]/eta^2` by `eps = t^(-g-1) eta` and `1/s = t + F(t) eta`.
//! Only the class of `F` modulo `k[t] + t^(1-g) k[1/t]` matters, so a ribbon
//! is stored as the coefficients `c_1, ..., c_(g-2)` of
//! `F(t) = sum c_j t^-j`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rank_exact, LaurentPoly, Rational, SparseExactMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ribbon {
    genus: u32,
    coeffs: Vec<Rational>,
}

/// A closed point of the ribbon, identified with a point of `P^1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointOnLine {
    /// The point `t = t0`.
    Affine(Rational),
    /// The point `s = 0`.
    Infinity,
}

/// Invertible 2x2 matrix `[[a, b], [c, d]]` acting by `t -> (a t + b)/(c t + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(Rational::one(), Rational::zero(), Rational::zero(), Rational::one())
    }

    /// `t -> 1/t`
    pub fn swap() -> Self {
        Self::new(Rational::zero(), Rational::one(), Rational::one(), Rational::zero())
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }
}

/// Coefficients `(c_1, ..., c_(g-2))` of the representative of `f` modulo
/// `k[t] + t^(1-g) k[1/t]`.
pub fn normalize_class(f: &LaurentPoly, genus: u32) -> Vec<Rational> {
    let n = genus.saturating_sub(2) as i64;
    (1..=n).map(|j| f.coeff(-j)).collect()
}

impl Ribbon {
    pub fn new(genus: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidInput(format!("genus must be at least 2, got {genus}")));
        }
        if coeffs.len() != genus as usize - 2 {
            return Err(Error::InvalidInput(format!(
                "genus {genus} needs {} coefficients, got {}",
                genus - 2,
                coeffs.len()
            )));
        }
        Ok(Self { genus, coeffs })
    }

    /// The split ribbon `F = 0`.
    pub fn hyperelliptic(genus: u32) -> Result<Self> {
        Self::new(genus, vec![Rational::zero(); genus.saturating_sub(2) as usize])
    }

    pub fn from_gluing(f: &LaurentPoly, genus: u32) -> Result<Self> {
        Self::new(genus, normalize_class(f, genus))
    }

    pub fn from_integers(genus: u32, coeffs: &[i64]) -> Result<Self> {
        Self::new(genus, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `c_l`, zero outside `1..=g-2`.
    pub fn coeff(&self, l: i64) -> Rational {
        if l >= 1 && (l as usize) <= self.coeffs.len() {
            self.coeffs[l as usize - 1].clone()
        } else {
            Rational::zero()
        }
    }

    /// `F(t) = sum c_j t^-j`
    pub fn gluing_function(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (-(i as i64) - 1, c.clone())),
        )
    }

    pub fn max_clifford(&self) -> u32 {
        max_clifford(self.genus)
    }

    /// Cup product with the gluing class, `H^0(O(m-2)) -> H^1(O(m-g-1))`,
    /// in the bases `t^j` and `t^-i`: the `(g-m) x (m-1)` Hankel matrix
    /// with entries `c_(i+j)`.
    pub fn hankel(&self, m: u32) -> SparseExactMatrix {
        let rows = self.genus.saturating_sub(m) as usize;
        let cols = m.saturating_sub(1) as usize;
        SparseExactMatrix::from_triplets(
            rows,
            cols,
            (0..rows).flat_map(|i| {
                (0..cols).map(move |j| (i, j, self.coeff((i + 1 + j) as i64)))
            }),
        )
    }

    /// The integer `a` in the splitting `Omega_C|P^1 = O(-a-2) + O(-b-2)`,
    /// `a <= b`. `a + 2` is the least twist `m` for which the cup product
    /// map has a kernel.
    pub fn clifford_index(&self) -> u32 {
        let mut m = 2;
        loop {
            let h = self.hankel(m);
            if rank_exact(&h) < h.ncols() {
                let a = m - 2;
                assert!(a <= self.max_clifford(), "Clifford index {a} exceeds bound");
                return a;
            }
            m += 1;
        }
    }

    pub fn is_hyperelliptic(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Whether the two ribbons are isomorphic by a map restricting to the
    /// identity on `P^1`, i.e. `F_1 = c F_2` for a nonzero scalar `c`.
    pub fn isomorphic_over_identity(&self, other: &Ribbon) -> bool {
        self.genus == other.genus && projective_key(&self.coeffs) == projective_key(&other.coeffs)
    }

    /// Blow-up at a closed point. At `t = t0` the class becomes
    /// `(t - t0) F(t)` in genus `g - 1`; at infinity the blow-up is
    /// conjugated to `t = 0` by `t -> 1/t`.
    pub fn blow_up(&self, x: &PointOnLine) -> Result<Ribbon> {
        if self.genus < 3 {
            return Err(Error::GenusTooSmall(self.genus));
        }
        match x {
            PointOnLine::Affine(t0) => {
                let line = LaurentPoly::from_terms([(1, Rational::one()), (0, -t0.clone())]);
                Ribbon::from_gluing(&(&line * &self.gluing_function()), self.genus - 1)
            }
            PointOnLine::Infinity => {
                let swapped = self.mobius_transport(&Mobius::swap())?;
                let blown = swapped.blow_up(&PointOnLine::Affine(Rational::zero()))?;
                blown.mobius_transport(&Mobius::swap())
            }
        }
    }

    /// Gluing class of the same ribbon in the coordinate `u` on `P^1`
    /// related to `t` by `t = (a u + b)/(c u + d)`.
    ///
    /// The class is read through the residue pairing with
    /// `H^0(Omega^2 (x) N^-1)`, which has basis `t^k dt^2 / eta` for
    /// `0 <= k <= g-3` and pairs to `c_(k+1)`. In the new coordinate the
    /// basis element `u^k du^2 / eta'` equals, up to the common factor
    /// `det^(1-g)`, `(d t - b)^k (a - c t)^(g-3-k) dt^2 / eta`.
    pub fn mobius_transport(&self, m: &Mobius) -> Result<Ribbon> {
        let det = m.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let g = self.genus as i64;
        if g <= 2 {
            return Ok(self.clone());
        }
        let scale = crate::exact::pow_rational(&det, 1 - g);
        let num = LaurentPoly::from_terms([(1, m.d.clone()), (0, -m.b.clone())]);
        let den = LaurentPoly::from_terms([(0, m.a.clone()), (1, -m.c.clone())]);
        let coeffs = (0..=g - 3)
            .map(|k| {
                let h = &num.pow(k as u32) * &den.pow((g - 3 - k) as u32);
                let mut acc = Rational::zero();
                for (j, hj) in h.terms() {
                    acc += hj * self.coeff(j + 1);
                }
                acc * &scale
            })
            .collect();
        Ribbon::new(self.genus, coeffs)
    }
}

pub fn max_clifford(genus: u32) -> u32 {
    genus.saturating_sub(1) / 2
}

/// Scales a vector so its first nonzero entry is one.
fn projective_key(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(lead) => {
            let inv = lead.recip();
            v.iter().map(|x| x * &inv).collect()
        }
    }
}

/// A ribbon built as a weighted sum of geometric progressions,
/// `F = sum_i weight_i sum_j ratio_i^(j-1) t^-j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricConstruction {
    pub ribbon: Ribbon,
    pub ratios: Vec<Rational>,
    pub weights: Vec<Rational>,
}

impl GeometricConstruction {
    pub fn from_parts(genus: u32, ratios: Vec<Rational>, weights: Vec<Rational>) -> Result<Self> {
        assert_eq!(ratios.len(), weights.len());
        let n = genus.saturating_sub(2) as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (r, w) in ratios.iter().zip(&weights) {
            let mut term = w.clone();
            for c in coeffs.iter_mut() {
                *c += &term;
                term *= r;
            }
        }
        Ok(Self {
            ribbon: Ribbon::new(genus, coeffs)?,
            ratios,
            weights,
        })
    }

    /// The construction ratios as blow-up centers.
    pub fn points(&self) -> Vec<PointOnLine> {
        self.ratios.iter().cloned().map(PointOnLine::Affine).collect()
    }
}

const CONSTRUCTION_RETRIES: usize = 64;

/// Small-height nonzero rationals used for every random choice.
pub fn rational_pool() -> Vec<Rational> {
    let mut pool = Vec::new();
    for den in 1..=3i64 {
        for num in -6..=6i64 {
            if num == 0 || num_integer::gcd(num, den) != 1 {
                continue;
            }
            pool.push(Rational::new(BigInt::from(num), BigInt::from(den)));
        }
    }
    pool
}

/// Random ribbon of genus `g` with Clifford index exactly `c`, together with
/// the geometric progressions it was built from.
pub fn construct_geometric(genus: u32, clifford: u32, seed: u64) -> Result<GeometricConstruction> {
    if genus < 2 || clifford > max_clifford(genus) {
        return Err(Error::InvalidClifford { genus, clifford });
    }
    if clifford == 0 {
        return GeometricConstruction::from_parts(genus, vec![], vec![]);
    }
    let pool = rational_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((genus as u64) << 40) ^ ((clifford as u64) << 32));
    for _ in 0..CONSTRUCTION_RETRIES {
        let ratios: Vec<Rational> = pool
            .choose_multiple(&mut rng, clifford as usize)
            .cloned()
            .collect();
        let weights: Vec<Rational> = (0..clifford)
            .map(|_| pool[rng.gen_range(0..pool.len())].clone())
            .collect();
        let built = GeometricConstruction::from_parts(genus, ratios, weights)?;
        if built.ribbon.clifford_index() == clifford {
            return Ok(built);
        }
    }
    Err(Error::ConstructionFailed { genus, clifford })
}

pub fn construct_with_clifford(genus: u32, clifford: u32, seed: u64) -> Result<Ribbon> {
    construct_geometric(genus, clifford, seed).map(|c| c.ribbon)
}

/// Least number of successive blow-ups at points from `candidates` that
/// reaches a hyperelliptic ribbon, searched breadth first up to
/// `floor((g-1)/2)` steps. `None` when no sequence within the bound works.
pub fn min_blowups_to_hyperelliptic(r: &Ribbon, candidates: &[PointOnLine]) -> Option<u32> {
    let bound = r.max_clifford();
    let mut seen: HashSet<(u32, Vec<Rational>)> = HashSet::new();
    let mut queue = VecDeque::from([(r.clone(), 0u32)]);
    seen.insert((r.genus, projective_key(&r.coeffs)));
    while let Some((cur, depth)) = queue.pop_front() {
        if cur.is_hyperelliptic() {
            return Some(depth);
        }
        if depth == bound || cur.genus < 3 {
            continue;
        }
        for x in candidates {
            let next = cur.blow_up(x).expect("genus checked above");
            if seen.insert((next.genus, projective_key(&next.coeffs))) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    None
}

impl FromStr for PointOnLine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(PointOnLine::Infinity);
        }
        parse_rational(s).map(PointOnLine::Affine)
    }
}

impl fmt::Display for PointOnLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointOnLine::Affine(t0) => write!(f, "{t0}"),
            PointOnLine::Infinity => write!(f, "inf"),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().map_err(|_| bad())?, d.parse::<BigInt>().map_err(|_| bad())?),
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// On-disk form: `{"genus": g, "coefficients": ["p/q", ...]}`.
#[derive(Serialize, Deserialize)]
struct RibbonJson {
    genus: u32,
    coefficients: Vec<String>,
}

impl Serialize for Ribbon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RibbonJson {
            genus: self.genus,
            coefficients: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ribbon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RibbonJson::deserialize(d)?;
        let coeffs = raw
            .coefficients
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ribbon::new(raw.genus, coeffs).map_err(serde::de::Error::custom)
    }
}

impl Ribbon {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ribbon serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

impl fmt::Display for Ribbon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ribbon(g={}, F={})", self.genus, self.gluing_function())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn r(g: u32, c: &[i64]) -> Ribbon {
        Ribbon::from_integers(g, c).unwrap()
    }

    #[test]
    fn normalization_window() {
        let f = LaurentPoly::from_terms([(0, int(1)), (-3, int(-1))]);
        assert_eq!(normalize_class(&f, 4), vec![int(0), int(0)]);
        let f = LaurentPoly::from_terms([(-1, int(1)), (-2, int(1))]);
        assert_eq!(normalize_class(&f, 5), vec![int(1), int(1), int(0)]);
        assert_eq!(normalize_class(&LaurentPoly::zero(), 6), vec![int(0); 4]);
        assert!(normalize_class(&f, 2).is_empty());
    }

    #[test]
    fn clifford_examples() {
        assert_eq!(r(7, &[0; 5]).clifford_index(), 0);
        assert_eq!(r(5, &[1, 1, 1]).clifford_index(), 1);
        assert_eq!(r(5, &[1, 0, 1]).clifford_index(), 2);
        assert_eq!(r(2, &[]).clifford_index(), 0);
    }

    #[test]
    fn hyperelliptic_iff_zero() {
        assert!(r(6, &[0; 4]).is_hyperelliptic());
        assert!(!r(5, &[1, 1, 1]).is_hyperelliptic());
        assert!(r(2, &[]).is_hyperelliptic());
    }

    #[test]
    fn isomorphism_up_to_scalar() {
        assert!(r(5, &[1, 1, 1]).isomorphic_over_identity(&r(5, &[3, 3, 3])));
        assert!(!r(5, &[1, 1, 1]).isomorphic_over_identity(&r(5, &[1, 1, 0])));
        assert!(r(5, &[0, 0, 0]).isomorphic_over_identity(&r(5, &[0, 0, 0])));
        assert!(!r(5, &[0, 0, 0]).isomorphic_over_identity(&r(6, &[0, 0, 0, 0])));
    }

    #[test]
    fn blow_up_examples() {
        let b = r(5, &[1, 1, 1]).blow_up(&PointOnLine::Affine(int(1))).unwrap();
        assert_eq!(b, r(4, &[0, 0]));
        let b = r(5, &[0, 0, 0]).blow_up(&PointOnLine::Affine(ratio(2, 3))).unwrap();
        assert!(b.is_hyperelliptic());
        let b = r(5, &[1, 0, 1]).blow_up(&PointOnLine::Affine(int(0))).unwrap();
        assert_eq!(b, r(4, &[0, 1]));
        assert_eq!(b.clifford_index(), 1);
        assert_eq!(r(2, &[]).blow_up(&PointOnLine::Infinity), Err(Error::GenusTooSmall(2)));
    }

    #[test]
    fn blow_up_at_infinity_drops_last_coefficient() {
        let ribbon = r(6, &[1, 2, 3, 4]);
        let b = ribbon.blow_up(&PointOnLine::Infinity).unwrap();
        assert!(b.isomorphic_over_identity(&r(5, &[1, 2, 3])));
    }

    #[test]
    fn transport_identity_and_swap() {
        let ribbon = r(6, &[1, -2, 3, 5]);
        assert_eq!(ribbon.mobius_transport(&Mobius::identity()).unwrap(), ribbon);
        let once = ribbon.mobius_transport(&Mobius::swap()).unwrap();
        assert!(once.isomorphic_over_identity(&r(6, &[5, 3, -2, 1])));
        let twice = once.mobius_transport(&Mobius::swap()).unwrap();
        assert!(twice.isomorphic_over_identity(&ribbon));
        let singular = Mobius::new(int(1), int(2), int(2), int(4));
        assert_eq!(ribbon.mobius_transport(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn construction_respects_range() {
        assert_eq!(
            construct_with_clifford(6, 3, 0),
            Err(Error::InvalidClifford { genus: 6, clifford: 3 })
        );
        assert_eq!(construct_with_clifford(9, 4, 11).unwrap().clifford_index(), 4);
        assert!(construct_with_clifford(7, 0, 1).unwrap().is_hyperelliptic());
    }

    #[test]
    fn single_progression_is_annihilated() {
        let built = construct_geometric(5, 1, 3).unwrap();
        let b = built.ribbon.blow_up(&built.points()[0]).unwrap();
        assert!(b.is_hyperelliptic());
    }

    #[test]
    fn min_blowups_two_ratios() {
        let built = GeometricConstruction::from_parts(5, vec![int(2), int(3)], vec![int(1), int(1)]).unwrap();
        assert_eq!(built.ribbon.clifford_index(), 2);
        assert_eq!(min_blowups_to_hyperelliptic(&built.ribbon, &built.points()), Some(2));
        assert_eq!(min_blowups_to_hyperelliptic(&r(5, &[0, 0, 0]), &[PointOnLine::Infinity]), Some(0));
        // a single non-annihilating center never reaches the split ribbon
        assert_eq!(
            min_blowups_to_hyperelliptic(&built.ribbon, &[PointOnLine::Affine(int(5))]),
            None
        );
    }

    #[test]
    fn json_roundtrip_is_bit_exact() {
        let text = r#"{"genus":5,"coefficients":["1","-3/2","0"]}"#;
        let ribbon = Ribbon::from_json(text).unwrap();
        assert_eq!(ribbon.coeffs()[1], ratio(-3, 2));
        assert_eq!(ribbon.to_json(), text);
        assert!(Ribbon::from_json(r#"{"genus":5,"coefficients":["1"]}"#).is_err());
        assert!(Ribbon::from_json(r#"{"genus":5,"coefficients":["1","2","1/0"]}"#).is_err());
        assert!(Ribbon::from_json("not json").is_err());
    }

    #[test]
    fn point_parsing() {
        assert_eq!("inf".parse::<PointOnLine>().unwrap(), PointOnLine::Infinity);
        assert_eq!("-2/4".parse::<PointOnLine>().unwrap(), PointOnLine::Affine(ratio(-1, 2)));
        assert!("x".parse::<PointOnLine>().is_err());
    }
}
