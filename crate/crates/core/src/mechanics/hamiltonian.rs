//! Hamiltonian actions on `F(S, M)` for a constant symplectic form on
//! `R^{2n}`: lifted finite-dimensional actions and `Diff_ham(M)`.
//!
//! Convention: `i_{X_h} ω = dh`. With `Ω_ij = ω(e_i, e_j)` this gives
//! `X_h = Ω^{−T} ∇h`, so for `ω = dx∧dy` the field is `(∂_y h, −∂_x h)`.
//! The Lie algebra bracket of vector fields is the opposite bracket
//! `[X, Y]^op = −[X, Y]`.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forms::{Fd, Form, ScalarFn, VectorField};
use crate::mapping::{bar_map, field_m, generator_m, map_space_d, map_space_interior, MapPoint, MapTangent};

/// Nodes of the Gauss–Legendre rule used for line-integral hamiltonians;
/// exact for polynomial integrands of degree below 32.
const LINE_NODES: usize = 16;

/// A hamiltonian function normalized at the base point, with its field.
#[derive(Clone, Debug)]
pub struct HamiltonianField {
    pub name: String,
    pub h: ScalarFn,
    pub field: VectorField,
}

/// `(R^{2n}, ω)` with constant `ω`, a base point `x₀` and a catalog of
/// polynomial hamiltonians.
#[derive(Clone, Debug)]
pub struct HamiltonianSystem {
    matrix: DMatrix<f64>,
    field_map: DMatrix<f64>,
    omega: Form,
    x0: Vec<f64>,
    catalog: Vec<HamiltonianField>,
}

impl HamiltonianSystem {
    /// Rejects matrices that are not antisymmetric or not invertible.
    pub fn new(matrix: DMatrix<f64>, x0: Vec<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !dim.is_multiple_of(2) {
            return Err(Error::Precondition(format!("symplectic matrix must be square of even size, got {dim}")));
        }
        if x0.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: x0.len() });
        }
        if (&matrix + matrix.transpose()).amax() > 1e-14 {
            return Err(Error::Precondition("symplectic matrix is not antisymmetric".into()));
        }
        let field_map = matrix
            .transpose()
            .try_inverse()
            .filter(|_| matrix.determinant().abs() > 1e-12)
            .ok_or_else(|| Error::Precondition("symplectic matrix is degenerate".into()))?;
        let terms = (0..dim)
            .flat_map(|i| ((i + 1)..dim).map(move |j| (i, j)))
            .filter(|&(i, j)| matrix[(i, j)] != 0.0)
            .map(|(i, j)| (vec![i, j], ScalarFn::constant(dim, matrix[(i, j)])))
            .collect();
        let omega = Form::from_coefficients(dim, 2, terms)?;
        Ok(Self { matrix, field_map, omega, x0, catalog: Vec::new() })
    }

    /// `(R², dx∧dy)` based at the origin, with the polynomial catalog.
    pub fn planar() -> Self {
        let mut sys = Self::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]), vec![0.0, 0.0])
            .expect("standard symplectic matrix");
        let mono = |c: f64, p: [u32; 2]| ScalarFn::monomial(2, c, &p);
        for (name, h) in [
            ("x", mono(1.0, [1, 0])),
            ("y", mono(1.0, [0, 1])),
            ("x^2", mono(1.0, [2, 0])),
            ("xy", mono(1.0, [1, 1])),
            ("rotation", mono(0.5, [2, 0]).add(&mono(0.5, [0, 2]))),
            ("x^2y+y^3", mono(1.0, [2, 1]).add(&mono(1.0, [0, 3]))),
        ] {
            sys.add_hamiltonian(name, h).expect("catalog dimension");
        }
        sys
    }

    /// `(R⁴, du₁∧du₂ + du₃∧du₄)` based at the origin.
    pub fn standard(n: usize) -> Self {
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(2 * i, 2 * i + 1)] = 1.0;
            m[(2 * i + 1, 2 * i)] = -1.0;
        }
        Self::new(m, vec![0.0; 2 * n]).expect("standard symplectic matrix")
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn base_point(&self) -> &[f64] {
        &self.x0
    }

    pub fn catalog(&self) -> &[HamiltonianField] {
        &self.catalog
    }

    pub fn add_hamiltonian(&mut self, name: &str, h: ScalarFn) -> Result<&HamiltonianField> {
        let entry = self.hamiltonian_field(name, &h)?;
        self.catalog.push(entry);
        Ok(self.catalog.last().expect("just pushed"))
    }

    /// `X_h` together with `h − h(x₀)`.
    pub fn hamiltonian_field(&self, name: &str, h: &ScalarFn) -> Result<HamiltonianField> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: h.dim() });
        }
        let h = h.add(&ScalarFn::constant(self.dim(), -h.value(&self.x0)));
        let partials: Vec<ScalarFn> = (0..self.dim()).map(|j| h.partial(j)).collect();
        let comps = (0..self.dim())
            .map(|i| {
                partials
                    .iter()
                    .enumerate()
                    .fold(ScalarFn::zero(self.dim()), |acc, (j, p)| acc.add(&p.scale(self.field_map[(i, j)])))
            })
            .collect();
        Ok(HamiltonianField { name: name.to_string(), h, field: VectorField::from_components(comps) })
    }

    /// Largest `|i_{X_h}ω(v) − dh(v)|` over the sample points and the
    /// coordinate directions.
    pub fn hamiltonian_residual(&self, hf: &HamiltonianField, points: &[Vec<f64>]) -> f64 {
        let mut worst = 0.0f64;
        for x in points {
            let xv = hf.field.at(x);
            let grad = hf.h.gradient(x);
            for (j, g) in grad.iter().enumerate() {
                let mut e = vec![0.0; self.dim()];
                e[j] = 1.0;
                worst = worst.max((self.omega.eval(x, &[&xv, &e]) - g).abs());
            }
        }
        worst
    }

    /// `[X, Y]^op = −[X, Y]`.
    pub fn bracket_op(x: &VectorField, y: &VectorField) -> VectorField {
        y.bracket(x)
    }

    /// The hamiltonian of a hamiltonian field `v` normalized at `x₀`:
    /// `k(x) = ∫₀¹ ω(v(x₀ + t(x − x₀)), x − x₀) dt`.
    pub fn line_hamiltonian(&self, v: &VectorField) -> impl Fn(&[f64]) -> f64 + Send + Sync + 'static {
        let (omega, x0, v) = (self.omega.clone(), self.x0.clone(), v.clone());
        let rule = GaussLegendre::new(NonZeroUsize::new(LINE_NODES).expect("nonzero"));
        move |x: &[f64]| {
            let dx: Vec<f64> = x.iter().zip(&x0).map(|(a, b)| a - b).collect();
            rule.integrate(0.0, 1.0, |t| {
                let p: Vec<f64> = x0.iter().zip(&dx).map(|(a, d)| a + t * d).collect();
                omega.eval(&p, &[&v.at(&p), &dx])
            })
        }
    }

    /// `⟨J(f), X_h⟩ = ∫_S (h∘f) μ`.
    pub fn momentum(&self, hf: &HamiltonianField, f: &MapPoint) -> Result<f64> {
        self.check_normalized(&hf.h)?;
        bar_map(&Form::function(hf.h.clone()), f.domain())?.eval(f, &[])
    }

    fn check_normalized(&self, h: &ScalarFn) -> Result<()> {
        let h0 = h.value(&self.x0);
        if h0.abs() > 1e-12 {
            return Err(Error::Precondition(format!("hamiltonian is {h0:e} at the base point")));
        }
        Ok(())
    }

    /// `d⟨J, X_h⟩ − i_{X̄_h} ω̄` at `f` on `y`.
    pub fn momentum_residual(&self, hf: &HamiltonianField, f: &MapPoint, y: &MapTangent, fd: Fd) -> Result<f64> {
        let dom = f.domain();
        let lhs = map_space_d(&bar_map(&Form::function(hf.h.clone()), dom)?, fd).eval(f, &[y])?;
        let rhs = map_space_interior(&bar_map(&self.omega, dom)?, &field_m(&hf.field)).eval(f, &[y])?;
        Ok((lhs - rhs).abs())
    }

    /// `σ(X, Y) = −ω(X, Y)(x₀)`.
    pub fn cocycle(&self, x: &VectorField, y: &VectorField) -> f64 {
        -self.omega.eval(&self.x0, &[&x.at(&self.x0), &y.at(&self.x0)])
    }

    /// `⟨J(f), [X, Y]^op⟩ − ω̄(X̄, Ȳ)(f)`, with the momentum of the bracket
    /// taken from its line-integral hamiltonian.
    pub fn cocycle_defining(&self, x: &VectorField, y: &VectorField, f: &MapPoint) -> Result<f64> {
        let k = self.line_hamiltonian(&Self::bracket_op(x, y));
        let dom = f.domain();
        let pairing = bar_map(&Form::new(self.dim(), 0, move |p, _| k(p)), dom)?.eval(f, &[])?;
        let xs = generator_m(x, f)?;
        let ys = generator_m(y, f)?;
        Ok(pairing - bar_map(&self.omega, dom)?.eval(f, &[&xs, &ys])?)
    }
}

/// Momentum map of the action of a Lie group `G` on `M` lifted to
/// `F(S, M)`, given through generators `ξ_M`, momentum components `J_ξ`
/// and structure constants of `g`.
#[derive(Clone, Debug)]
pub struct LiftedGAction {
    pub names: Vec<String>,
    pub generators: Vec<VectorField>,
    pub momenta: Vec<ScalarFn>,
    /// `[ξ_a, ξ_b] = Σ_c structure[a][b][c] ξ_c` in `g`.
    pub structure: Vec<Vec<Vec<f64>>>,
}

impl LiftedGAction {
    /// The special Euclidean algebra `se(2)` acting on `(R², dx∧dy)`:
    /// translations `T_x`, `T_y` and the rotation about the origin.
    pub fn se2() -> Self {
        let mono = |c: f64, p: [u32; 2]| ScalarFn::monomial(2, c, &p);
        let generators = vec![
            VectorField::constant(&[1.0, 0.0]),
            VectorField::constant(&[0.0, 1.0]),
            VectorField::from_components(vec![mono(-1.0, [0, 1]), mono(1.0, [1, 0])]),
        ];
        let momenta = vec![mono(1.0, [0, 1]), mono(-1.0, [1, 0]), mono(-0.5, [2, 0]).add(&mono(-0.5, [0, 2]))];
        let mut structure = vec![vec![vec![0.0; 3]; 3]; 3];
        structure[0][2] = vec![0.0, -1.0, 0.0];
        structure[2][0] = vec![0.0, 1.0, 0.0];
        structure[1][2] = vec![1.0, 0.0, 0.0];
        structure[2][1] = vec![-1.0, 0.0, 0.0];
        Self { names: vec!["Tx".into(), "Ty".into(), "Rot".into()], generators, momenta, structure }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Largest `|i_{ξ_M}ω − dJ_ξ|` over generators, points and coordinate
    /// directions.
    pub fn momentum_residual(&self, sys: &HamiltonianSystem, points: &[Vec<f64>]) -> f64 {
        (0..self.len())
            .map(|a| {
                let hf = HamiltonianField {
                    name: self.names[a].clone(),
                    h: self.momenta[a].clone(),
                    field: self.generators[a].clone(),
                };
                sys.hamiltonian_residual(&hf, points)
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation of `[ξ_a, ξ_b]_M` from `−[ξ_{a,M}, ξ_{b,M}]`.
    pub fn structure_residual(&self, points: &[Vec<f64>]) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.len() {
            for b in 0..self.len() {
                let lie = HamiltonianSystem::bracket_op(&self.generators[a], &self.generators[b]);
                for x in points {
                    let expect = self.combine(&self.structure[a][b], x);
                    for (u, v) in lie.at(x).iter().zip(expect) {
                        worst = worst.max((u - v).abs());
                    }
                }
            }
        }
        worst
    }

    fn combine(&self, coeffs: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            for (o, v) in out.iter_mut().zip(g.at(x)) {
                *o += c * v;
            }
        }
        out
    }

    /// `J̄(f) = ∫_S (J∘f) μ`, one component per generator.
    pub fn momentum(&self, f: &MapPoint) -> Result<Vec<f64>> {
        self.momenta
            .iter()
            .map(|j| bar_map(&Form::function(j.clone()), f.domain())?.eval(f, &[]))
            .collect()
    }

    /// `σ(ξ_a, ξ_b) = ⟨J(x), [ξ_a, ξ_b]⟩ − ω(ξ_{a,M}, ξ_{b,M})(x)` at `x`.
    pub fn cocycle_at(&self, sys: &HamiltonianSystem, a: usize, b: usize, x: &[f64]) -> f64 {
        let pairing: f64 = self.structure[a][b].iter().zip(&self.momenta).map(|(c, j)| c * j.value(x)).sum();
        pairing - sys.omega().eval(x, &[&self.generators[a].at(x), &self.generators[b].at(x)])
    }

    /// `⟨J̄(f), [ξ_a, ξ_b]⟩ − ω̄(ξ_{a,F}, ξ_{b,F})(f)`.
    pub fn cocycle_on_maps(&self, sys: &HamiltonianSystem, a: usize, b: usize, f: &MapPoint) -> Result<f64> {
        let j = self.momentum(f)?;
        let pairing: f64 = self.structure[a][b].iter().zip(&j).map(|(c, v)| c * v).sum();
        let xa = generator_m(&self.generators[a], f)?;
        let xb = generator_m(&self.generators[b], f)?;
        Ok(pairing - bar_map(sys.omega(), f.domain())?.eval(f, &[&xa, &xb])?)
    }

    /// `d⟨J̄, ξ⟩ − i_{ξ_F} ω̄` at `f` on `y`.
    pub fn momentum_residual_on_maps(
        &self,
        sys: &HamiltonianSystem,
        a: usize,
        f: &MapPoint,
        y: &MapTangent,
        fd: Fd,
    ) -> Result<f64> {
        let hf = HamiltonianField {
            name: self.names[a].clone(),
            h: self.momenta[a].clone(),
            field: self.generators[a].clone(),
        };
        let dom = f.domain();
        let lhs = map_space_d(&bar_map(&Form::function(hf.h.clone()), dom)?, fd).eval(f, &[y])?;
        let rhs = map_space_interior(&bar_map(sys.omega(), dom)?, &field_m(&hf.field)).eval(f, &[y])?;
        Ok((lhs - rhs).abs())
    }
}
