//! Convex cones: membership, the induced order, lattice operations and
//! seeded sampling.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::sym_eigenvalues;
use crate::point::{Point, PointKind};
use crate::rng::Sampler;

/// Per-coordinate probability of zeroing an orthant coordinate, and of
/// drawing a rank-deficient PSD sample.
pub const BOUNDARY_PROB: f64 = 0.2;

/// Coordinate floor for open orthants and the diagonal shift for open PSD
/// samples, as a multiple of the sampling scale.
pub const OPEN_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum ConeSpec {
    /// `ℝ₊ᴺ`
    NonnegOrthant(usize),
    /// `ℝ₊₊ᴺ`, the open orthant.
    PositiveOrthant(usize),
    /// `ℝᴺ`, ordered coordinatewise.
    FullSpace(usize),
    /// Positive semidefinite `N × N` matrices with the Löwner order.
    Psd(usize),
    /// Positive definite `N × N` matrices (open; its closure is [`ConeSpec::Psd`]).
    PositiveDefinite(usize),
    /// Cartesian product; points are the concatenation of flattened factors.
    Product(Vec<ConeSpec>),
    /// Nonnegative functions on `m` grid points with cell width `h`, carrying
    /// the `L^p` exponent `p ≥ 1` for norms built on top.
    GridLp { m: usize, p: f64, h: f64 },
}

impl ConeSpec {
    pub fn grid_lp(m: usize, p: f64, h: f64) -> Result<Self> {
        let c = ConeSpec::GridLp { m, p, h };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConeSpec::NonnegOrthant(n)
            | ConeSpec::PositiveOrthant(n)
            | ConeSpec::FullSpace(n)
            | ConeSpec::Psd(n)
            | ConeSpec::PositiveDefinite(n) => {
                if *n == 0 {
                    return Err(Error::param("dim", "must be at least 1"));
                }
            }
            ConeSpec::Product(factors) => {
                if factors.is_empty() {
                    return Err(Error::param("factors", "product needs at least one factor"));
                }
                for f in factors {
                    f.validate()?;
                }
            }
            ConeSpec::GridLp { m, p, h } => {
                if *m == 0 {
                    return Err(Error::param("m", "must be at least 1"));
                }
                if !(*p >= 1.0) {
                    return Err(Error::param("p", "must satisfy p ≥ 1"));
                }
                if !(*h > 0.0 && h.is_finite()) {
                    return Err(Error::param("h", "grid step must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> &'static str {
        match self {
            ConeSpec::NonnegOrthant(_) => "nonneg-orthant",
            ConeSpec::PositiveOrthant(_) => "positive-orthant",
            ConeSpec::FullSpace(_) => "full-space",
            ConeSpec::Psd(_) => "psd",
            ConeSpec::PositiveDefinite(_) => "positive-definite",
            ConeSpec::Product(_) => "product",
            ConeSpec::GridLp { .. } => "grid-lp",
        }
    }

    /// `N` for vectors and matrices alike; for products, the total number of
    /// flat coordinates.
    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::NonnegOrthant(n)
            | ConeSpec::PositiveOrthant(n)
            | ConeSpec::FullSpace(n)
            | ConeSpec::Psd(n)
            | ConeSpec::PositiveDefinite(n) => *n,
            ConeSpec::Product(_) => self.flat_len(),
            ConeSpec::GridLp { m, .. } => *m,
        }
    }

    /// Number of stored reals in a point of this cone.
    pub fn flat_len(&self) -> usize {
        match self {
            ConeSpec::Psd(n) | ConeSpec::PositiveDefinite(n) => n * n,
            ConeSpec::Product(factors) => factors.iter().map(|f| f.flat_len()).sum(),
            _ => self.dim(),
        }
    }

    pub fn point_kind(&self) -> PointKind {
        match self {
            ConeSpec::Psd(_) | ConeSpec::PositiveDefinite(_) => PointKind::Matrix,
            _ => PointKind::Vector,
        }
    }

    pub fn is_matrix(&self) -> bool {
        self.point_kind() == PointKind::Matrix
    }

    pub fn contains_origin(&self) -> bool {
        match self {
            ConeSpec::PositiveOrthant(_) | ConeSpec::PositiveDefinite(_) => false,
            ConeSpec::Product(factors) => factors.iter().all(|f| f.contains_origin()),
            _ => true,
        }
    }

    pub fn supports_lattice(&self) -> bool {
        match self {
            ConeSpec::Psd(_) | ConeSpec::PositiveDefinite(_) => false,
            ConeSpec::Product(factors) => factors.iter().all(|f| f.supports_lattice()),
            _ => true,
        }
    }

    /// The closed cone with the same interior.
    pub fn closure(&self) -> ConeSpec {
        match self {
            ConeSpec::PositiveOrthant(n) => ConeSpec::NonnegOrthant(*n),
            ConeSpec::PositiveDefinite(n) => ConeSpec::Psd(*n),
            ConeSpec::Product(factors) => ConeSpec::Product(factors.iter().map(|f| f.closure()).collect()),
            other => other.clone(),
        }
    }

    /// Flat coordinate ranges of the product factors (one range otherwise).
    pub fn factor_ranges(&self) -> Vec<Range<usize>> {
        match self {
            ConeSpec::Product(factors) => {
                let mut start = 0;
                factors
                    .iter()
                    .map(|f| {
                        let r = start..start + f.flat_len();
                        start = r.end;
                        r
                    })
                    .collect()
            }
            _ => vec![0..self.flat_len()],
        }
    }

    pub fn zero(&self) -> Point {
        match self.point_kind() {
            PointKind::Matrix => Point::zero_matrix(self.dim()),
            PointKind::Vector => Point::zeros(self.flat_len()),
        }
    }

    /// The order unit: all-ones for vector cones, `I` for matrix cones, and
    /// the concatenation of factor units for products.
    pub fn unit(&self) -> Point {
        match self {
            ConeSpec::Psd(n) | ConeSpec::PositiveDefinite(n) => Point::identity(*n),
            ConeSpec::Product(factors) => {
                Point::vector(factors.iter().flat_map(|f| f.unit().as_slice().to_vec()).collect())
            }
            _ => Point::vector(vec![1.0; self.flat_len()]),
        }
    }

    /// Extreme rays used for coordinate scans: `eᵢ` for vector cones and
    /// `eᵢeᵢᵀ` for matrix cones.
    pub fn basis_rays(&self) -> Vec<Point> {
        match self {
            ConeSpec::Psd(n) | ConeSpec::PositiveDefinite(n) => (0..*n)
                .map(|i| {
                    let mut d = vec![0.0; *n];
                    d[i] = 1.0;
                    Point::diag(&d)
                })
                .collect(),
            _ => {
                let len = self.flat_len();
                (0..len)
                    .map(|i| {
                        let mut d = vec![0.0; len];
                        d[i] = 1.0;
                        Point::vector(d)
                    })
                    .collect()
            }
        }
    }

    /// Shape check for points handed to this cone.
    pub fn check_shape(&self, x: &Point) -> Result<()> {
        let expected = match self.point_kind() {
            PointKind::Matrix => self.dim(),
            PointKind::Vector => self.flat_len(),
        };
        if x.kind() != self.point_kind() || x.dim() != expected {
            return Err(Error::shape(format!(
                "{} cone of dimension {} cannot hold a {:?} point of dimension {}",
                self.family(),
                self.dim(),
                x.kind(),
                x.dim()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ConeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeSpec::Product(factors) => {
                let parts: Vec<String> = factors.iter().map(|c| c.to_string()).collect();
                write!(f, "product({})", parts.join(" x "))
            }
            ConeSpec::GridLp { m, p, h } => write!(f, "grid-lp(m={m}, p={p}, h={h})"),
            other => write!(f, "{}({})", other.family(), other.dim()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    family: String,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<ConeSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
}

impl Serialize for ConeSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (factors, p, h) = match self {
            ConeSpec::Product(fs) => (Some(fs.clone()), None, None),
            ConeSpec::GridLp { p, h, .. } => (None, Some(*p), Some(*h)),
            _ => (None, None, None),
        };
        ConeRepr {
            family: self.family().to_string(),
            dim: self.dim(),
            factors,
            p,
            h,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConeSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ConeRepr::deserialize(deserializer)?;
        let cone = match r.family.as_str() {
            "nonneg-orthant" => ConeSpec::NonnegOrthant(r.dim),
            "positive-orthant" => ConeSpec::PositiveOrthant(r.dim),
            "full-space" => ConeSpec::FullSpace(r.dim),
            "psd" => ConeSpec::Psd(r.dim),
            "positive-definite" => ConeSpec::PositiveDefinite(r.dim),
            "product" => ConeSpec::Product(
                r.factors.ok_or_else(|| D::Error::missing_field("factors"))?,
            ),
            "grid-lp" => ConeSpec::GridLp {
                m: r.dim,
                p: r.p.ok_or_else(|| D::Error::missing_field("p"))?,
                h: r.h.ok_or_else(|| D::Error::missing_field("h"))?,
            },
            other => return Err(D::Error::custom(format!("unknown cone family `{other}`"))),
        };
        cone.validate().map_err(D::Error::custom)?;
        Ok(cone)
    }
}

fn factor_point(cone: &ConeSpec, data: &[f64]) -> Point {
    match cone.point_kind() {
        PointKind::Matrix => Point::from_flat_matrix_unchecked(cone.dim(), data.to_vec()),
        PointKind::Vector => Point::vector(data.to_vec()),
    }
}

/// Whether `x` lies in the cone, with slack `tol` on the closed constraints.
///
/// Orthant coordinates must be `≥ −tol`; PSD matrices need
/// `λ_min ≥ −tol·max(1, ‖x‖_F)`. Open cones are tested strictly.
pub fn member(cone: &ConeSpec, x: &Point, tol: f64) -> Result<bool> {
    cone.check_shape(x)?;
    if !x.is_finite() {
        return Ok(false);
    }
    let v = x.as_slice();
    Ok(match cone {
        ConeSpec::NonnegOrthant(_) | ConeSpec::GridLp { .. } => v.iter().all(|&c| c >= -tol),
        ConeSpec::PositiveOrthant(_) => v.iter().all(|&c| c > 0.0),
        ConeSpec::FullSpace(_) => true,
        ConeSpec::Psd(_) => {
            let lmin = sym_eigenvalues(x)?.last().copied().unwrap_or(0.0);
            lmin >= -tol * x.norm().max(1.0)
        }
        ConeSpec::PositiveDefinite(_) => sym_eigenvalues(x)?.last().copied().unwrap_or(0.0) > 0.0,
        ConeSpec::Product(factors) => {
            for (f, r) in factors.iter().zip(cone.factor_ranges()) {
                if !member(f, &factor_point(f, &v[r]), tol)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// `x ≤ y` in the order of the cone's closure, so the relation is reflexive
/// even for open cones.
pub fn leq(cone: &ConeSpec, x: &Point, y: &Point, tol: f64) -> Result<bool> {
    cone.check_shape(x)?;
    member(&cone.closure(), &y.sub(x)?, tol)
}

/// Coordinatewise `(x ∧ y, x ∨ y)`.
pub fn meet_join(cone: &ConeSpec, x: &Point, y: &Point) -> Result<(Point, Point)> {
    if !cone.supports_lattice() {
        return Err(Error::Capability(format!(
            "{} has no lattice operations",
            cone.family()
        )));
    }
    cone.check_shape(x)?;
    cone.check_shape(y)?;
    let (a, b) = (x.as_slice(), y.as_slice());
    let meet = a.iter().zip(b).map(|(p, q)| p.min(*q)).collect();
    let join = a.iter().zip(b).map(|(p, q)| p.max(*q)).collect();
    Ok((x.with_data(meet), x.with_data(join)))
}

/// `(uᵢ − uⱼ)(vᵢ − vⱼ) ≥ −tol` for every pair `i < j`.
pub fn comonotonic(u: &Point, v: &Point, tol: f64) -> Result<bool> {
    if u.is_matrix() || v.is_matrix() || u.dim() != v.dim() {
        return Err(Error::shape("comonotonicity needs two vectors of equal length"));
    }
    let (a, b) = (u.as_slice(), v.as_slice());
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if (a[i] - a[j]) * (b[i] - b[j]) < -tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A random member of `cone` with the default boundary probability.
pub fn sample(cone: &ConeSpec, s: &mut Sampler, scale: f64) -> Point {
    sample_with(cone, s, scale, BOUNDARY_PROB)
}

/// A random member of `cone`.
///
/// Closed orthant coordinates are `|g|·scale` and are zeroed with probability
/// `boundary_prob`; PSD samples are `G·Gᵀ·scale/N`, where `G` drops to a
/// random lower rank with probability `boundary_prob`.
pub fn sample_with(cone: &ConeSpec, s: &mut Sampler, scale: f64, boundary_prob: f64) -> Point {
    match cone {
        ConeSpec::NonnegOrthant(n) | ConeSpec::GridLp { m: n, .. } => {
            Point::vector(orthant_coords(*n, s, scale, boundary_prob, 0.0))
        }
        ConeSpec::PositiveOrthant(n) => {
            Point::vector(orthant_coords(*n, s, scale, boundary_prob, OPEN_FLOOR * scale))
        }
        ConeSpec::FullSpace(n) => Point::vector((0..*n).map(|_| s.gaussian() * scale).collect()),
        ConeSpec::Psd(n) => {
            let rank = if s.bernoulli(boundary_prob) { s.index(*n) } else { *n };
            gram(*n, rank, s, scale, 0.0)
        }
        ConeSpec::PositiveDefinite(n) => gram(*n, *n, s, scale, OPEN_FLOOR * scale),
        ConeSpec::Product(factors) => Point::vector(
            factors
                .iter()
                .flat_map(|f| sample_with(f, s, scale, boundary_prob).as_slice().to_vec())
                .collect(),
        ),
    }
}

fn orthant_coords(n: usize, s: &mut Sampler, scale: f64, boundary_prob: f64, floor: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let g = s.gaussian().abs() * scale;
            let zero = s.bernoulli(boundary_prob);
            if zero {
                floor
            } else {
                g + floor
            }
        })
        .collect()
}

/// `G·Gᵀ·scale/n + shift·I` with `G` an `n × rank` Gaussian matrix.
fn gram(n: usize, rank: usize, s: &mut Sampler, scale: f64, shift: f64) -> Point {
    let g: Vec<f64> = (0..n * rank).map(|_| s.gaussian()).collect();
    let c = scale / n as f64;
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let dot: f64 = (0..rank).map(|k| g[i * rank + k] * g[j * rank + k]).sum();
            let mut v = dot * c;
            if i == j {
                v += shift;
            }
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    Point::from_flat_matrix_unchecked(n, data)
}

/// Two nonnegative vectors ordered by one shared random permutation.
pub fn sample_comonotone_pair(n: usize, s: &mut Sampler, scale: f64) -> (Point, Point) {
    let mut u = orthant_coords(n, s, scale, BOUNDARY_PROB, 0.0);
    let mut v = orthant_coords(n, s, scale, BOUNDARY_PROB, 0.0);
    u.sort_by(f64::total_cmp);
    v.sort_by(f64::total_cmp);
    let perm = s.permutation(n);
    let mut pu = vec![0.0; n];
    let mut pv = vec![0.0; n];
    for (rank, &slot) in perm.iter().enumerate() {
        pu[slot] = u[rank];
        pv[slot] = v[rank];
    }
    (Point::vector(pu), Point::vector(pv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;
    use proptest::prelude::*;

    fn sampler(i: u64) -> Sampler {
        SeedStream::new(7, i).sampler()
    }

    #[test]
    fn membership_examples() {
        assert!(member(&ConeSpec::NonnegOrthant(2), &Point::zeros(2), 0.0).unwrap());
        let indefinite = Point::matrix(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(!member(&ConeSpec::Psd(2), &indefinite, 1e-12).unwrap());
        let edge = Point::vector(vec![1.0, 0.0]);
        assert!(!member(&ConeSpec::PositiveOrthant(2), &edge, 0.0).unwrap());
        assert!(matches!(
            member(&ConeSpec::NonnegOrthant(3), &edge, 0.0),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn order_examples() {
        let o = ConeSpec::NonnegOrthant(2);
        let (a, b) = (Point::vector(vec![1.0, 2.0]), Point::vector(vec![1.0, 3.0]));
        assert!(leq(&o, &a, &b, 0.0).unwrap());
        let psd = ConeSpec::Psd(2);
        assert!(leq(&psd, &Point::identity(2), &Point::identity(2).scale(2.0), 0.0).unwrap());
        let (p, q) = (Point::diag(&[1.0, 0.0]), Point::diag(&[0.0, 1.0]));
        assert!(!leq(&psd, &p, &q, 1e-12).unwrap());
        assert!(!leq(&psd, &q, &p, 1e-12).unwrap());
        // reflexive on the open orthant
        let pos = ConeSpec::PositiveOrthant(2);
        assert!(leq(&pos, &a, &a, 0.0).unwrap());
    }

    #[test]
    fn meet_join_examples() {
        let o = ConeSpec::NonnegOrthant(2);
        let (m, j) = meet_join(&o, &Point::vector(vec![1.0, 4.0]), &Point::vector(vec![3.0, 2.0])).unwrap();
        assert_eq!((m.as_slice(), j.as_slice()), (&[1.0, 2.0][..], &[3.0, 4.0][..]));
        let x = Point::vector(vec![0.5, 7.0]);
        let (m, j) = meet_join(&o, &x, &x).unwrap();
        assert_eq!((&m, &j), (&x, &x));
        let (m, j) = meet_join(&o, &Point::vector(vec![0.0, 5.0]), &Point::vector(vec![5.0, 0.0])).unwrap();
        assert_eq!((m.as_slice(), j.as_slice()), (&[0.0, 0.0][..], &[5.0, 5.0][..]));
        let e = meet_join(&ConeSpec::Psd(2), &Point::identity(2), &Point::identity(2)).unwrap_err();
        assert!(matches!(e, Error::Capability(_)));
    }

    #[test]
    fn comonotonic_examples() {
        let v = |d: &[f64]| Point::vector(d.to_vec());
        assert!(comonotonic(&v(&[1.0, 2.0, 3.0]), &v(&[0.0, 0.0, 5.0]), 0.0).unwrap());
        assert!(!comonotonic(&v(&[1.0, 2.0]), &v(&[2.0, 1.0]), 0.0).unwrap());
        assert!(comonotonic(&v(&[4.0, 4.0, 4.0]), &v(&[3.0, -1.0, 9.0]), 0.0).unwrap());
    }

    #[test]
    fn json_form() {
        let c = ConeSpec::Product(vec![ConeSpec::NonnegOrthant(2), ConeSpec::NonnegOrthant(2)]);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.starts_with(r#"{"family":"product","dim":4,"factors":"#));
        assert_eq!(serde_json::from_str::<ConeSpec>(&s).unwrap(), c);
        let g: ConeSpec = serde_json::from_str(r#"{"family":"grid-lp","dim":16,"p":2.0,"h":0.0625}"#).unwrap();
        assert_eq!(g, ConeSpec::GridLp { m: 16, p: 2.0, h: 0.0625 });
        assert!(serde_json::from_str::<ConeSpec>(r#"{"family":"grid-lp","dim":4,"p":0.5,"h":1}"#).is_err());
        assert_eq!(
            serde_json::to_string(&ConeSpec::Psd(3)).unwrap(),
            r#"{"family":"psd","dim":3}"#
        );
    }

    #[test]
    fn sampling_is_seeded() {
        for cone in [ConeSpec::NonnegOrthant(4), ConeSpec::Psd(3)] {
            assert_eq!(sample(&cone, &mut sampler(3), 1.0), sample(&cone, &mut sampler(3), 1.0));
        }
    }

    #[test]
    fn psd_samples_have_nonneg_spectrum() {
        for i in 0..200 {
            let a = sample(&ConeSpec::Psd(3), &mut sampler(i), 1.0);
            assert!(sym_eigenvalues(&a).unwrap()[2] >= -1e-10);
        }
    }

    #[test]
    fn boundary_is_hit() {
        let cone = ConeSpec::NonnegOrthant(3);
        let zeros = (0..500)
            .map(|i| sample(&cone, &mut sampler(i), 1.0))
            .filter(|x| x.as_slice().iter().any(|&c| c == 0.0))
            .count();
        assert!(zeros > 100, "only {zeros} boundary samples");
    }

    fn cones() -> Vec<ConeSpec> {
        vec![
            ConeSpec::NonnegOrthant(3),
            ConeSpec::PositiveOrthant(3),
            ConeSpec::FullSpace(2),
            ConeSpec::Psd(3),
            ConeSpec::PositiveDefinite(2),
            ConeSpec::Product(vec![ConeSpec::NonnegOrthant(2), ConeSpec::Psd(2)]),
            ConeSpec::GridLp { m: 8, p: 2.0, h: 0.125 },
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn samples_are_members(seed in any::<u64>(), which in 0usize..7, scale in 0.01f64..100.0) {
            let cone = &cones()[which];
            let x = sample(cone, &mut SeedStream::new(seed, 0).sampler(), scale);
            prop_assert!(member(cone, &x, 1e-10).unwrap());
        }

        #[test]
        fn lattice_identity_is_exact(seed in any::<u64>(), n in 1usize..8) {
            let cone = ConeSpec::NonnegOrthant(n);
            let mut s = SeedStream::new(seed, 1).sampler();
            let (x, y) = (sample(&cone, &mut s, 1.0), sample(&cone, &mut s, 1.0));
            let (m, j) = meet_join(&cone, &x, &y).unwrap();
            prop_assert_eq!(m.add(&j).unwrap(), x.add(&y).unwrap());
        }

        #[test]
        fn order_is_transitive(seed in any::<u64>(), which in 0usize..7) {
            let cone = &cones()[which];
            let tol = 1e-12;
            let mut s = SeedStream::new(seed, 2).sampler();
            let x = sample(cone, &mut s, 1.0);
            let y = x.add(&sample(cone, &mut s, 1.0)).unwrap();
            let z = y.add(&sample(cone, &mut s, 1.0)).unwrap();
            prop_assert!(leq(cone, &x, &y, tol).unwrap() && leq(cone, &y, &z, tol).unwrap());
            prop_assert!(leq(cone, &x, &z, 2.0 * tol).unwrap());
        }

        #[test]
        fn shared_sort_is_comonotone(seed in any::<u64>(), n in 1usize..10) {
            let mut s = SeedStream::new(seed, 3).sampler();
            let (u, v) = sample_comonotone_pair(n, &mut s, 1.0);
            prop_assert!(comonotonic(&u, &v, 0.0).unwrap());
            prop_assert!(u.as_slice().iter().chain(v.as_slice()).all(|&c| c >= 0.0));
        }
    }
}
