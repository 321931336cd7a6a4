//! Point-mass catalog, centre of gravity and inertia tensor.
//!
//! Catalog positions are in centimetres in the chassis geometric frame.
//! Inertia tensors are returned in kg m^2 about the centre of gravity; the
//! cm to m conversion happens once, in [`inertia_matrix`].

use std::collections::HashSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{InertiaTensor, Mat3, Vec3};

const CM_TO_M: f64 = 0.01;

const BUNDLED_CATALOG: &str = include_str!("../data/cubesat_catalog.json");

/// A named lumped mass.
///
/// `layout_cm` optionally spreads the mass evenly over several points given
/// as offsets from `position_cm` (panels that physically sit on the box
/// faces but are listed at their combined centroid).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassComponent {
    pub name: String,
    pub mass_kg: f64,
    pub position_cm: Vec3,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layout_cm: Vec<Vec3>,
}

impl MassComponent {
    pub fn point(name: impl Into<String>, mass_kg: f64, position_cm: Vec3) -> Self {
        Self { name: name.into(), mass_kg, position_cm, layout_cm: Vec::new() }
    }

    /// The point masses this component expands to.
    pub fn points(&self) -> Vec<(f64, Vec3)> {
        if self.layout_cm.is_empty() {
            vec![(self.mass_kg, self.position_cm)]
        } else {
            let share = self.mass_kg / self.layout_cm.len() as f64;
            self.layout_cm.iter().map(|off| (share, self.position_cm + *off)).collect()
        }
    }

    /// Centroid of the expanded points.
    pub fn centroid(&self) -> Vec3 {
        let pts = self.points();
        let m: f64 = pts.iter().map(|p| p.0).sum();
        if m == 0.0 {
            return self.position_cm;
        }
        pts.iter().fold(Vec3::zeros(), |acc, (mi, r)| acc + *r * *mi) / m
    }
}

/// Axis-aligned payload chamber, cm, chassis geometric frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChamber", into = "RawChamber")]
pub struct ChamberBounds {
    min: Vec3,
    max: Vec3,
}

#[derive(Serialize, Deserialize)]
struct RawChamber {
    min_cm: Vec3,
    max_cm: Vec3,
}

impl TryFrom<RawChamber> for ChamberBounds {
    type Error = Error;
    fn try_from(r: RawChamber) -> Result<Self> {
        Self::new(r.min_cm, r.max_cm)
    }
}

impl From<ChamberBounds> for RawChamber {
    fn from(c: ChamberBounds) -> Self {
        RawChamber { min_cm: c.min, max_cm: c.max }
    }
}

impl Default for ChamberBounds {
    /// x, y in [-4, 4] cm and z in [0, 18] cm.
    fn default() -> Self {
        Self { min: Vec3::new(-4.0, -4.0, 0.0), max: Vec3::new(4.0, 4.0, 18.0) }
    }
}

impl ChamberBounds {
    pub fn new(min: Vec3, max: Vec3) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidChamber("bounds must be finite".into()));
        }
        for i in 0..3 {
            if !(min[i] < max[i]) {
                return Err(Error::InvalidChamber(format!("axis {i}: min {} is not below max {}", min[i], max[i])));
            }
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> Vec3 {
        self.min
    }

    pub fn max(&self) -> Vec3 {
        self.max
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    /// The eight corners, x varying fastest.
    pub fn corners(&self) -> [Vec3; 8] {
        std::array::from_fn(|k| {
            let pick = |bit: usize, i: usize| if k >> bit & 1 == 0 { self.min[i] } else { self.max[i] };
            Vec3::new(pick(0, 0), pick(1, 1), pick(2, 2))
        })
    }
}

/// Where the regolith sits for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RegolithPositionRaw {
    Fixed(Vec3),
    Sampled(SampledTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SampledTag {
    Sampled,
}

#[derive(Serialize, Deserialize)]
struct RawRegolith {
    name: String,
    mass_kg: f64,
    position_cm: RegolithPositionRaw,
}

#[derive(Serialize, Deserialize)]
struct RawCatalog {
    components: Vec<MassComponent>,
    regolith: RawRegolith,
    #[serde(default)]
    chamber: ChamberBounds,
}

/// Spacecraft components plus the movable regolith mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCatalog", into = "RawCatalog")]
pub struct MassCatalog {
    components: Vec<MassComponent>,
    regolith: MassComponent,
    regolith_sampled: bool,
    chamber: ChamberBounds,
}

impl TryFrom<RawCatalog> for MassCatalog {
    type Error = Error;
    fn try_from(raw: RawCatalog) -> Result<Self> {
        let (position, sampled) = match raw.regolith.position_cm {
            RegolithPositionRaw::Fixed(p) => (p, false),
            RegolithPositionRaw::Sampled(_) => (raw.chamber.center(), true),
        };
        let regolith = MassComponent::point(raw.regolith.name, raw.regolith.mass_kg, position);
        let mut cat = Self::new(raw.components, regolith, raw.chamber)?;
        cat.regolith_sampled = sampled;
        Ok(cat)
    }
}

impl From<MassCatalog> for RawCatalog {
    fn from(c: MassCatalog) -> Self {
        let position_cm = if c.regolith_sampled {
            RegolithPositionRaw::Sampled(SampledTag::Sampled)
        } else {
            RegolithPositionRaw::Fixed(c.regolith.position_cm)
        };
        RawCatalog {
            components: c.components,
            regolith: RawRegolith { name: c.regolith.name, mass_kg: c.regolith.mass_kg, position_cm },
            chamber: c.chamber,
        }
    }
}

impl MassCatalog {
    pub fn new(components: Vec<MassComponent>, regolith: MassComponent, chamber: ChamberBounds) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidCatalog("at least one component is required".into()));
        }
        let mut names = HashSet::new();
        for c in components.iter().chain(std::iter::once(&regolith)) {
            if !names.insert(c.name.as_str()) {
                return Err(Error::InvalidCatalog(format!("duplicate component name {:?}", c.name)));
            }
            if !c.position_cm.is_finite() || c.layout_cm.iter().any(|p| !p.is_finite()) {
                return Err(Error::InvalidCatalog(format!("{}: position must be finite", c.name)));
            }
        }
        if let Some(c) = components.iter().find(|c| !(c.mass_kg > 0.0 && c.mass_kg.is_finite())) {
            return Err(Error::InvalidCatalog(format!("{}: mass must be positive, got {}", c.name, c.mass_kg)));
        }
        if !(regolith.mass_kg >= 0.0 && regolith.mass_kg.is_finite()) {
            return Err(Error::InvalidCatalog(format!("regolith mass must be non-negative, got {}", regolith.mass_kg)));
        }
        Ok(Self { components, regolith, regolith_sampled: false, chamber })
    }

    /// The bundled 3U mass table with the regolith stowed at (0, 0, 14) cm.
    pub fn bundled() -> Self {
        Self::from_json_str(BUNDLED_CATALOG).expect("bundled catalog is valid")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|source| Error::Parse { what: "mass catalog".into(), source })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|source| Error::Parse { what: path.display().to_string(), source })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    pub fn components(&self) -> &[MassComponent] {
        &self.components
    }

    pub fn regolith(&self) -> &MassComponent {
        &self.regolith
    }

    pub fn chamber(&self) -> &ChamberBounds {
        &self.chamber
    }

    pub fn regolith_sampled(&self) -> bool {
        self.regolith_sampled
    }

    /// Copy with the regolith fixed at `position_cm`.
    pub fn with_regolith_at(&self, position_cm: Vec3) -> Self {
        let mut c = self.clone();
        c.regolith.position_cm = position_cm;
        c.regolith_sampled = false;
        c
    }

    pub fn with_regolith_mass(&self, mass_kg: f64) -> Self {
        let mut c = self.clone();
        c.regolith.mass_kg = mass_kg;
        c
    }

    pub fn with_chamber(&self, chamber: ChamberBounds) -> Self {
        let mut c = self.clone();
        c.chamber = chamber;
        c
    }

    /// Components followed by the regolith.
    pub fn all_components(&self) -> impl Iterator<Item = &MassComponent> {
        self.components.iter().chain(std::iter::once(&self.regolith))
    }

    /// Every point mass `(kg, cm)` after layout expansion.
    pub fn point_masses(&self) -> Vec<(f64, Vec3)> {
        self.all_components().flat_map(|c| c.points()).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.all_components().map(|c| c.mass_kg).sum()
    }

    /// Translates every component by `offset_cm`, chamber included.
    pub fn translated(&self, offset_cm: Vec3) -> Self {
        let mut c = self.clone();
        for comp in c.components.iter_mut().chain(std::iter::once(&mut c.regolith)) {
            comp.position_cm += offset_cm;
        }
        c.chamber = ChamberBounds { min: c.chamber.min + offset_cm, max: c.chamber.max + offset_cm };
        c
    }
}

/// Mass-weighted mean position, cm.
pub fn compute_cg(catalog: &MassCatalog) -> Vec3 {
    let pts = catalog.point_masses();
    let m: f64 = pts.iter().map(|p| p.0).sum();
    pts.iter().fold(Vec3::zeros(), |acc, (mi, r)| acc + *r * *mi) / m
}

/// Component centroids relative to `r_g`, cm; components then regolith.
pub fn recentre(catalog: &MassCatalog, r_g: Vec3) -> Vec<Vec3> {
    catalog.all_components().map(|c| c.centroid() - r_g).collect()
}

/// Angular momentum `sum r x m (w x r)` of point masses `(kg, m)` in pure rotation.
pub fn angular_momentum(points: &[(f64, Vec3)], omega: &Vec3) -> Vec3 {
    points.iter().fold(Vec3::zeros(), |acc, (m, r)| acc + r.cross(&(omega.cross(r) * *m)))
}

/// Inertia about the CG in geometric axes, kg m^2, without definiteness checks.
///
/// `H` is linear in `w`, so the coefficient of `w_j` in `H_i` is read off by
/// evaluating `H` at the unit rate `e_j`: column `j` of `J` is `H(e_j)`.
pub fn inertia_matrix(catalog: &MassCatalog) -> Mat3 {
    let cg = compute_cg(catalog);
    let pts: Vec<(f64, Vec3)> =
        catalog.point_masses().into_iter().filter(|p| p.0 > 0.0).map(|(m, r)| (m, (r - cg) * CM_TO_M)).collect();
    let cols: [Vec3; 3] = std::array::from_fn(|j| angular_momentum(&pts, &Vec3::axis(j)));
    let j = Mat3::from_fn(|r, c| cols[c][r]);
    // products of inertia computed through different summation orders may differ in the last bit
    Mat3::from_fn(|r, c| 0.5 * (j.m[r][c] + j.m[c][r]))
}

/// Inertia tensor about the CG; errors when all mass is collinear.
pub fn inertia_tensor(catalog: &MassCatalog) -> Result<InertiaTensor> {
    let j = inertia_matrix(catalog);
    InertiaTensor::new(j).map_err(|_| Error::DegenerateCatalog { tensor: j.m })
}

/// Principal moments and the rotation from geometric to principal axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalFrame {
    /// Diagonal of the tensor in principal axes, kg m^2.
    pub moments: Vec3,
    /// Rows are the principal axes in geometric components: `v_body = R v_geom`.
    pub rotation: Mat3,
}

/// Derived mass properties for one regolith placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassProperties {
    pub total_mass: f64,
    pub cg_cm: Vec3,
    /// About the CG, geometric axes.
    pub inertia: InertiaTensor,
}

impl MassProperties {
    pub fn from_catalog(catalog: &MassCatalog) -> Result<Self> {
        Ok(Self { total_mass: catalog.total_mass(), cg_cm: compute_cg(catalog), inertia: inertia_tensor(catalog)? })
    }

    /// Principal axes, each matched to the geometric axis it is closest to.
    pub fn principal_frame(&self) -> PrincipalFrame {
        principal_frame(self.inertia.matrix())
    }
}

/// Eigen-decomposition of a symmetric tensor with axes ordered and signed to
/// stay as close to the input axes as possible (right-handed result).
pub fn principal_frame(j: &Mat3) -> PrincipalFrame {
    let off = j.m[0][1].abs().max(j.m[0][2].abs()).max(j.m[1][2].abs());
    if off <= 1e-12 * j.trace().abs() {
        return PrincipalFrame { moments: j.diagonal(), rotation: Mat3::identity() };
    }
    let na = nalgebra::Matrix3::from_fn(|r, c| j.m[r][c]);
    let eig = na.symmetric_eigen();
    let vecs: [Vec3; 3] = std::array::from_fn(|k| {
        let c = eig.eigenvectors.column(k);
        Vec3::new(c[0], c[1], c[2])
    });

    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    // perm[axis] = eigenvector index assigned to that axis
    let perm = PERMS
        .iter()
        .copied()
        .max_by(|a, b| {
            let score = |p: &[usize; 3]| (0..3).map(|i| vecs[p[i]][i].abs()).sum::<f64>();
            score(a).partial_cmp(&score(b)).unwrap()
        })
        .unwrap();
    let signed = |axis: usize| {
        let v = vecs[perm[axis]];
        if v[axis] < 0.0 {
            -v
        } else {
            v
        }
    };
    let ex = signed(0);
    let ey = signed(1);
    let ez = ex.cross(&ey);
    let mut rotation = Mat3::from_rows(&ex, &ey, &ez);
    // the QR iteration leaves ~1e-10 relative residue; Jacobi sweeps clean it up
    for _ in 0..3 {
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let a = rotation.mul_mat(j).mul_mat(&rotation.transpose());
            let apq = a.m[p][q];
            if apq.abs() <= f64::MIN_POSITIVE {
                continue;
            }
            let theta = (a.m[q][q] - a.m[p][p]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut g = Mat3::identity();
            g.m[p][p] = c;
            g.m[q][q] = c;
            g.m[p][q] = -s;
            g.m[q][p] = s;
            rotation = g.mul_mat(&rotation);
        }
    }
    let d = rotation.mul_mat(j).mul_mat(&rotation.transpose());
    PrincipalFrame { moments: d.diagonal(), rotation }
}

/// CG and inertia for one regolith corner placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CornerSample {
    pub regolith_cm: Vec3,
    pub cg_cm: Vec3,
    pub inertia: Mat3,
}

/// Elementwise bounds over the eight chamber corners. They contain the CG and
/// products of inertia of any interior placement, but only bound the moments
/// from above.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub cg_min: Vec3,
    pub cg_max: Vec3,
    pub inertia_min: Mat3,
    pub inertia_max: Mat3,
    pub corners: Vec<CornerSample>,
}

impl Envelope {
    pub fn contains_cg(&self, cg: &Vec3, tol: f64) -> bool {
        (0..3).all(|i| cg[i] >= self.cg_min[i] - tol && cg[i] <= self.cg_max[i] + tol)
    }
}

/// Places the regolith at each chamber corner and bounds the resulting CG and inertia.
pub fn corner_envelope(catalog: &MassCatalog, chamber: &ChamberBounds) -> Envelope {
    let corners: Vec<CornerSample> = chamber
        .corners()
        .iter()
        .map(|p| {
            let c = catalog.with_regolith_at(*p);
            CornerSample { regolith_cm: *p, cg_cm: compute_cg(&c), inertia: inertia_matrix(&c) }
        })
        .collect();
    let first = corners[0];
    let mut env = Envelope {
        cg_min: first.cg_cm,
        cg_max: first.cg_cm,
        inertia_min: first.inertia,
        inertia_max: first.inertia,
        corners: Vec::new(),
    };
    for s in &corners[1..] {
        env.cg_min = env.cg_min.zip_map(&s.cg_cm, f64::min);
        env.cg_max = env.cg_max.zip_map(&s.cg_cm, f64::max);
        env.inertia_min = env.inertia_min.zip_map(&s.inertia, f64::min);
        env.inertia_max = env.inertia_max.zip_map(&s.inertia, f64::max);
    }
    env.corners = corners;
    env
}

/// Uniform, per-axis independent regolith position inside the chamber.
pub fn sample_regolith(chamber: &ChamberBounds, seed: u64) -> Vec3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_regolith_with(chamber, &mut rng)
}

pub fn sample_regolith_with<R: Rng>(chamber: &ChamberBounds, rng: &mut R) -> Vec3 {
    let (lo, hi) = (chamber.min(), chamber.max());
    Vec3::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y), rng.gen_range(lo.z..=hi.z))
}

/// Centripetal acceleration `r w^2` felt at `radius_m` from the spin axis, m/s^2.
pub fn artificial_gravity(radius_m: f64, omega_rad_s: f64) -> f64 {
    radius_m * omega_rad_s * omega_rad_s
}
