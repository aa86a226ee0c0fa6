//! The Ext complex on Spec O_K, its cohomology groups, canonical class
//! representatives, cup products and the Bockstein map.
//!
//! Ext^i(Z/n, G_m) is computed from the three-term complex
//! K* -> K* (+) Div K -> Div K with d0(a) = (a^{-n}, div(a)) and
//! d1(a, I) = div(a) + n I. The middle cohomology Z1/B1 is presented by
//! explicit generators: units modulo n-th powers and one pair (a, I) per
//! n-torsion class-group generator. H^i is the Pontryagin dual of
//! Ext^{3-i}; as finite abelian groups the two share invariant factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::big;
use crate::classunit::{class_group, unit_group, units_mod_nth_powers, ClassGroup, UnitGroup};
use crate::embed::Embeddings;
use crate::error::{Error, Result};
use crate::ext::CyclicExtension;
use crate::ideal::FractionalIdeal;
use crate::matz::{self, Mat};
use crate::nf::{FieldElement, NumberField};

/// A cocycle pair (a, ideal) with -div(a) = n * ideal.
#[derive(Debug, Clone)]
pub struct Ext1Class {
    pub a: FieldElement,
    pub ideal: FractionalIdeal,
}

/// Invariant factors of a finite abelian group (each > 1, divisibility
/// chain order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    pub invariants: Vec<BigInt>,
}

impl GroupStructure {
    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }
}

/// Presentation of Z1/B1: generators (units with the unit ideal, then
/// one pair per n-torsion class generator) with their relation matrix
/// and Smith normal form data for canonical coordinates.
#[derive(Debug, Clone)]
pub struct Ext1Presentation {
    pub gens: Vec<Ext1Class>,
    pub num_unit_gens: usize,
    /// For each class generator: (index into the class-group invariants,
    /// its order g = gcd(d_i, n)).
    class_data: Vec<(usize, BigInt)>,
    pub rel: Mat,
    pub invariants: Vec<BigInt>,
    diag: Vec<BigInt>,
    v_mat: Mat,
    nontrivial: Vec<usize>,
}

/// Everything the cohomology of (Spec O_K, Z/n) needs: class group,
/// units, the n-torsion roots of unity and the Z1/B1 presentation.
#[derive(Debug, Clone)]
pub struct CohomologyCtx {
    pub field: NumberField,
    pub n: u64,
    pub cls: ClassGroup,
    pub units: UnitGroup,
    pub emb: Embeddings,
    /// |mu_n(K)| and a generator of mu_n(K).
    pub mu_order: u64,
    pub mu_gen: FieldElement,
    /// Generators of U/U^n with their orders (torsion first).
    pub unit_gens: Vec<(FieldElement, u64)>,
    pub ext1: Ext1Presentation,
}

/// The integral cup coefficient: the paper's n^2/(2d) in the form
/// n(d+1)/2 * (n/d), always an integer for d | n.
pub fn kappa(n: u64, d: u64) -> u64 {
    debug_assert!(d >= 1 && n % d == 0);
    ((n * (d + 1) / 2) % n) * (n / d) % n
}

impl CohomologyCtx {
    pub fn new(field: NumberField, n: u64, seed: u64) -> Result<CohomologyCtx> {
        if n == 0 {
            return Err(Error::Parse("modulus n must be positive".into()));
        }
        let cls = class_group(&field, seed)?;
        let units = unit_group(&field, &cls, seed)?;
        let emb = Embeddings::new(&field);
        let w = units.torsion_order;
        let mu_order = w.gcd(&n);
        let mu_gen = field.pow(&units.torsion_gen, (w / mu_order) as i64)?;
        let unit_gens = units_mod_nth_powers(&field, &units, n);
        let ext1 = build_ext1_presentation(&field, n, &cls, &units, &emb, &unit_gens)?;
        Ok(CohomologyCtx {
            field,
            n,
            cls,
            units,
            emb,
            mu_order,
            mu_gen,
            unit_gens,
            ext1,
        })
    }

    /// Membership of (a, ideal) in Z1: -div(a) = n * ideal.
    pub fn check_z1(&self, c: &Ext1Class) -> Result<()> {
        if c.a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let pa = self.field.principal_ideal(&c.a)?;
        let prod = self
            .field
            .ideal_mul(&pa, &self.field.ideal_pow(&c.ideal, self.n as i64));
        if self.field.ideal_is_unit(&prod) {
            Ok(())
        } else {
            Err(Error::NotInZ1)
        }
    }

    /// The B1 class attached to b: (b^n, -div(b)), which is zero in
    /// Z1/B1 by definition.
    pub fn b1_class(&self, b: &FieldElement) -> Result<Ext1Class> {
        if b.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(Ext1Class {
            a: self.field.pow(b, self.n as i64)?,
            ideal: self.field.ideal_inverse(&self.field.principal_ideal(b)?),
        })
    }

    /// Raw coordinates of a cocycle over the presentation generators.
    pub fn ext1_coords_raw(&self, c: &Ext1Class) -> Result<Vec<BigInt>> {
        self.check_z1(c)?;
        let k = &self.field;
        let pres = &self.ext1;
        let nc = pres.class_data.len();
        // Class part: [ideal] decomposed over the n-torsion generators.
        let mut e = vec![BigInt::zero(); nc];
        let mut rem = c.ideal.clone();
        if !self.cls.invariants.is_empty() {
            let delta = self.cls.dlog(k, &c.ideal)?;
            for (pos, (inv_idx, g)) in pres.class_data.iter().enumerate() {
                let d_i = &self.cls.invariants[*inv_idx];
                let step = d_i / g;
                let (q, r) = delta[*inv_idx].div_rem(&step);
                if !r.is_zero() {
                    return Err(Error::NotInZ1);
                }
                e[pos] = q.mod_floor(g);
            }
            // Torsion classes with gcd(d_i, n) = 1 must be absent.
            for (i, d_i) in self.cls.invariants.iter().enumerate() {
                if d_i.gcd(&big(self.n as i64)).is_one() && !delta[i].is_zero() {
                    return Err(Error::NotInZ1);
                }
            }
            for (pos, (inv_idx, _)) in pres.class_data.iter().enumerate() {
                if e[pos].is_zero() {
                    continue;
                }
                let gen_ideal = &pres.gens[pres.num_unit_gens + pos].ideal;
                let ei = e[pos].to_i64().expect("small exponent");
                let _ = inv_idx;
                rem = k.ideal_mul(&rem, &k.ideal_pow(gen_ideal, -ei));
            }
        }
        // The remainder is principal: strip it as a B1 element.
        let s = self
            .cls
            .is_principal(k, &rem)?
            .ok_or(Error::NotInZ1)?;
        // eps = a * prod a_i^{-e_i} * s^n is a global unit.
        let mut eps = c.a.clone();
        for (pos, ei) in e.iter().enumerate() {
            if ei.is_zero() {
                continue;
            }
            let a_i = &self.ext1.gens[self.ext1.num_unit_gens + pos].a;
            let p = k.pow(a_i, -ei.to_i64().expect("small exponent"))?;
            eps = k.mul(&eps, &p);
        }
        eps = k.mul(&eps, &k.pow(&s, self.n as i64)?);
        let ucoords = self.unit_dlog(&eps)?;
        let mut out = ucoords;
        out.extend(e);
        Ok(out)
    }

    /// Canonical coordinates: raw coordinates pushed through the Smith
    /// normal form of the relation matrix. Classes are equal in Z1/B1
    /// iff their canonical coordinates agree.
    pub fn ext1_reduce(&self, c: &Ext1Class) -> Result<Vec<BigInt>> {
        let x = self.ext1_coords_raw(c)?;
        let t = Mat::vec_mul(&x, &self.ext1.v_mat);
        Ok(self
            .ext1
            .nontrivial
            .iter()
            .map(|&i| t[i].mod_floor(&self.ext1.diag[i]))
            .collect())
    }

    /// Express a global unit over the U/U^n generators (exactly verified
    /// torsion part; fundamental exponents recovered from logarithms).
    pub fn unit_dlog(&self, eps: &FieldElement) -> Result<Vec<BigInt>> {
        let k = &self.field;
        if !eps.is_integral() || !k.norm(eps).to_integer().abs().is_one() {
            return Err(Error::Parse("element is not a unit".into()));
        }
        let r = self.units.fundamental.len();
        let mut b = vec![0i64; r];
        if r > 0 {
            let logv = |x: &FieldElement| -> Vec<f64> {
                self.emb
                    .embed(x)
                    .iter()
                    .map(|z| z.abs().max(1e-300).ln())
                    .collect()
            };
            let cols: Vec<Vec<f64>> = self.units.fundamental.iter().map(|u| logv(u)).collect();
            let target = logv(eps);
            // Normal equations for the least-squares exponents.
            let mut g = vec![vec![0.0; r]; r];
            let mut rhs = vec![0.0; r];
            for i in 0..r {
                for j in 0..r {
                    g[i][j] = cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum();
                }
                rhs[i] = cols[i].iter().zip(&target).map(|(x, y)| x * y).sum();
            }
            // Gaussian elimination (r <= 2 in scope).
            for c in 0..r {
                let p = (c..r)
                    .max_by(|&a, &bb| g[a][c].abs().partial_cmp(&g[bb][c].abs()).unwrap())
                    .unwrap();
                g.swap(c, p);
                rhs.swap(c, p);
                for i in 0..r {
                    if i != c && g[c][c].abs() > 1e-12 {
                        let f = g[i][c] / g[c][c];
                        for j in 0..r {
                            g[i][j] -= f * g[c][j];
                        }
                        rhs[i] -= f * rhs[c];
                    }
                }
            }
            for c in 0..r {
                b[c] = (rhs[c] / g[c][c]).round() as i64;
            }
        }
        let mut tau = eps.clone();
        for (j, u) in self.units.fundamental.iter().enumerate() {
            tau = k.mul(&tau, &k.pow(u, -b[j])?);
        }
        // Match the residual torsion part exactly.
        let w = self.units.torsion_order;
        let mut alpha = None;
        let mut z = k.one();
        for aa in 0..w {
            if tau == z {
                alpha = Some(aa);
                break;
            }
            z = k.mul(&z, &self.units.torsion_gen);
        }
        let alpha = alpha.ok_or_else(|| {
            Error::SearchExhausted("unit discrete logarithm residual".into())
        })?;
        let mut out = Vec::new();
        let t = w.gcd(&self.n);
        if t > 1 {
            out.push(big((alpha % t) as i64));
        }
        for bj in &b {
            out.push(big(bj.rem_euclid(self.n as i64)));
        }
        Ok(out)
    }

    /// Canonical structure of Ext^i(Z/n, G_m).
    pub fn ext_group(&self, i: usize) -> Result<GroupStructure> {
        let cyclic = |m: u64| -> GroupStructure {
            GroupStructure {
                invariants: if m > 1 { vec![big(m as i64)] } else { vec![] },
            }
        };
        match i {
            0 => Ok(cyclic(self.mu_order)),
            1 => Ok(GroupStructure {
                invariants: self.ext1.invariants.clone(),
            }),
            2 => {
                let nn = big(self.n as i64);
                Ok(GroupStructure {
                    invariants: self
                        .cls
                        .invariants
                        .iter()
                        .map(|d| d.gcd(&nn))
                        .filter(|g| !g.is_one())
                        .collect(),
                })
            }
            3 => Ok(cyclic(self.n)),
            _ => Err(Error::Parse("Ext degree out of range".into())),
        }
    }

    /// H^i of the compactified spectrum: Pontryagin dual of Ext^{3-i}
    /// (same invariant factors); zero above degree 3. The scope gate
    /// requires a totally imaginary field or odd n.
    pub fn h_group(&self, i: usize) -> Result<GroupStructure> {
        if !self.field.is_totally_imaginary() && self.n % 2 == 0 {
            return Err(Error::ScopeViolation);
        }
        if i > 3 {
            return Ok(GroupStructure { invariants: vec![] });
        }
        self.ext_group(3 - i)
    }
}

fn build_ext1_presentation(
    k: &NumberField,
    n: u64,
    cls: &ClassGroup,
    units: &UnitGroup,
    emb: &Embeddings,
    unit_gens: &[(FieldElement, u64)],
) -> Result<Ext1Presentation> {
    let _ = emb;
    let nn = big(n as i64);
    let mut gens: Vec<Ext1Class> = Vec::new();
    for (u, _) in unit_gens {
        gens.push(Ext1Class {
            a: u.clone(),
            ideal: k.unit_ideal(),
        });
    }
    let nu = gens.len();
    let mut class_data = Vec::new();
    let mut class_gens: Vec<(FieldElement, FractionalIdeal, BigInt)> = Vec::new();
    for (i, d_i) in cls.invariants.iter().enumerate() {
        let g = d_i.gcd(&nn);
        if g.is_one() {
            continue;
        }
        // The n-torsion part of <G_i> is generated by G_i^(d_i/g).
        let step = (d_i / &g).to_i64().expect("small class order");
        let ideal = k.ideal_pow(&cls.generators[i], step);
        // a with -div(a) = n * ideal: the inverse of a generator of
        // ideal^n.
        let y = cls
            .is_principal(k, &k.ideal_pow(&ideal, n as i64))?
            .expect("n-torsion class has principal n-th power");
        let a = k.invert(&y)?;
        class_data.push((i, g.clone()));
        class_gens.push((a, ideal, g));
    }
    for (a, ideal, _) in &class_gens {
        gens.push(Ext1Class {
            a: a.clone(),
            ideal: ideal.clone(),
        });
    }
    let total = gens.len();
    // Relation rows: ord_j e_j for unit generators; g_i e_i minus the
    // unit coordinates of eps_i = a_i^{g_i} z_i^n for class generators.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(total);
    for (j, (_, ord)) in unit_gens.iter().enumerate() {
        let mut row = vec![BigInt::zero(); total];
        row[j] = big(*ord as i64);
        rows.push(row);
    }
    // A temporary context-free unit dlog: built after the fact through a
    // small closure over the same data the public method uses.
    let helper = |eps: &FieldElement| -> Result<Vec<BigInt>> {
        unit_dlog_impl(k, n, units, unit_gens, eps)
    };
    for (pos, (a, ideal, g)) in class_gens.iter().enumerate() {
        let gi = g.to_i64().expect("small order");
        let z = cls
            .is_principal(k, &k.ideal_pow(ideal, gi))?
            .expect("g-th power of the torsion generator is principal");
        let eps = k.mul(&k.pow(a, gi)?, &k.pow(&z, n as i64)?);
        let ucoords = helper(&eps)?;
        let mut row = vec![BigInt::zero(); total];
        for (j, c) in ucoords.iter().enumerate() {
            row[j] = -c.clone();
        }
        row[nu + pos] = g.clone();
        rows.push(row);
    }
    let rel = Mat::from_rows(rows);
    let (d, _u, v, _vi) = matz::snf(&rel);
    let mut diag = Vec::with_capacity(total);
    for i in 0..total {
        let e = d[(i, i)].abs();
        assert!(!e.is_zero(), "Z1/B1 is finite");
        diag.push(e);
    }
    let nontrivial: Vec<usize> = (0..total).filter(|&i| diag[i] > BigInt::one()).collect();
    let invariants: Vec<BigInt> = nontrivial.iter().map(|&i| diag[i].clone()).collect();
    Ok(Ext1Presentation {
        gens,
        num_unit_gens: nu,
        class_data,
        rel,
        invariants,
        diag,
        v_mat: v,
        nontrivial,
    })
}

/// Standalone unit discrete log used during presentation construction
/// (same algorithm as CohomologyCtx::unit_dlog).
fn unit_dlog_impl(
    k: &NumberField,
    n: u64,
    units: &UnitGroup,
    unit_gens: &[(FieldElement, u64)],
    eps: &FieldElement,
) -> Result<Vec<BigInt>> {
    let _ = unit_gens;
    if !eps.is_integral() || !k.norm(eps).to_integer().abs().is_one() {
        return Err(Error::Parse("element is not a unit".into()));
    }
    let emb = Embeddings::new(k);
    let r = units.fundamental.len();
    let mut b = vec![0i64; r];
    if r > 0 {
        let logv = |x: &FieldElement| -> Vec<f64> {
            emb.embed(x)
                .iter()
                .map(|z| z.abs().max(1e-300).ln())
                .collect()
        };
        let cols: Vec<Vec<f64>> = units.fundamental.iter().map(|u| logv(u)).collect();
        let target = logv(eps);
        let mut g = vec![vec![0.0; r]; r];
        let mut rhs = vec![0.0; r];
        for i in 0..r {
            for j in 0..r {
                g[i][j] = cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum();
            }
            rhs[i] = cols[i].iter().zip(&target).map(|(x, y)| x * y).sum();
        }
        for c in 0..r {
            let p = (c..r)
                .max_by(|&a, &bb| g[a][c].abs().partial_cmp(&g[bb][c].abs()).unwrap())
                .unwrap();
            g.swap(c, p);
            rhs.swap(c, p);
            for i in 0..r {
                if i != c && g[c][c].abs() > 1e-12 {
                    let f = g[i][c] / g[c][c];
                    for j in 0..r {
                        g[i][j] -= f * g[c][j];
                    }
                    rhs[i] -= f * rhs[c];
                }
            }
        }
        for c in 0..r {
            b[c] = (rhs[c] / g[c][c]).round() as i64;
        }
    }
    let mut tau = eps.clone();
    for (j, u) in units.fundamental.iter().enumerate() {
        tau = k.mul(&tau, &k.pow(u, -b[j])?);
    }
    let w = units.torsion_order;
    let mut alpha = None;
    let mut z = k.one();
    for aa in 0..w {
        if tau == z {
            alpha = Some(aa);
            break;
        }
        z = k.mul(&z, &units.torsion_gen);
    }
    let alpha =
        alpha.ok_or_else(|| Error::SearchExhausted("unit discrete logarithm residual".into()))?;
    let mut out = Vec::new();
    let t = w.gcd(&n);
    if t > 1 {
        out.push(big((alpha % t) as i64));
    }
    for bj in &b {
        out.push(big(bj.rem_euclid(n as i64)));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Degree-one classes, cup products and the Bockstein
// ---------------------------------------------------------------------------

/// A class in H^1: an everywhere-unramified cyclic extension with d | n,
/// equivalently the character Cl K/n -> Z/n it induces.
#[derive(Debug, Clone)]
pub struct H1Class {
    pub ext: CyclicExtension,
}

impl H1Class {
    pub fn n(&self) -> u64 {
        self.ext.n
    }

    pub fn is_trivial(&self) -> bool {
        self.ext.rel_degree == 1
    }

    /// The induced character on ideals: (n/d) * Art_{L|K} lifted to Z/n.
    pub fn chi(&self, ideal: &FractionalIdeal) -> Result<u64> {
        if self.is_trivial() {
            return Ok(0);
        }
        let n = self.ext.n;
        let d = self.ext.rel_degree;
        let a = self.ext.artin_of_ideal(ideal)?;
        Ok((n / d) * a % n)
    }
}

/// A class in H^2 = (Z1/B1)^~: a value table on the presentation
/// generators, validated against all relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Class {
    pub values: Vec<BigInt>,
    pub n: u64,
}

impl H2Class {
    /// Build and validate a value table.
    pub fn new(ctx: &CohomologyCtx, values: Vec<BigInt>) -> Result<H2Class> {
        let n = ctx.n;
        if values.len() != ctx.ext1.gens.len() {
            return Err(Error::NotWellDefined("wrong table length".into()));
        }
        let values: Vec<BigInt> = values
            .into_iter()
            .map(|v| v.mod_floor(&big(n as i64)))
            .collect();
        let c = H2Class { values, n };
        c.validate(ctx)?;
        Ok(c)
    }

    pub fn zero(ctx: &CohomologyCtx) -> H2Class {
        H2Class {
            values: vec![BigInt::zero(); ctx.ext1.gens.len()],
            n: ctx.n,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    fn validate(&self, ctx: &CohomologyCtx) -> Result<()> {
        let nn = big(self.n as i64);
        for i in 0..ctx.ext1.rel.rows {
            let mut acc = BigInt::zero();
            for j in 0..ctx.ext1.rel.cols {
                acc += &ctx.ext1.rel[(i, j)] * &self.values[j];
            }
            if !acc.mod_floor(&nn).is_zero() {
                return Err(Error::NotWellDefined(format!(
                    "relation row {i} evaluates to {acc}"
                )));
            }
        }
        Ok(())
    }

    /// Evaluate the functional at a cocycle.
    pub fn evaluate(&self, ctx: &CohomologyCtx, c: &Ext1Class) -> Result<BigInt> {
        let coords = ctx.ext1_coords_raw(c)?;
        let mut acc = BigInt::zero();
        for (x, v) in coords.iter().zip(&self.values) {
            acc += x * v;
        }
        Ok(acc.mod_floor(&big(self.n as i64)))
    }
}

/// A class in H^3 = mu_n(K)^~, recorded as the pairing value against the
/// chosen generator of mu_n(K), in Z/n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H3Class {
    pub value: BigInt,
    pub n: u64,
}

/// Class group and unit group of the top field of an extension; the
/// witness solvers for cup_11 need both.
#[derive(Debug, Clone)]
pub struct TopData {
    pub cls: ClassGroup,
    pub units: UnitGroup,
}

pub fn top_data(ext: &CyclicExtension, seed: u64) -> Result<TopData> {
    let cls = class_group(&ext.top, seed)?;
    let units = unit_group(&ext.top, &cls, seed)?;
    Ok(TopData { cls, units })
}

/// Best-effort top data for fields whose class and unit groups are out
/// of computational reach (high degree or unit rank). Principality is
/// then decided only by the exact-verified generator search and norm
/// equations only by torsion and random search: every produced witness
/// is still exactly verified, but solvable instances may surface as
/// search-exhausted errors instead of answers.
pub fn top_data_best_effort(ext: &CyclicExtension) -> Result<TopData> {
    let (torsion_order, torsion_gen) = ext.top.roots_of_unity()?;
    Ok(TopData {
        cls: ClassGroup::assumed_trivial(),
        units: UnitGroup {
            torsion_order,
            torsion_gen,
            fundamental: vec![],
        },
    })
}

/// The Bockstein image of x: the functional (a, I) -> (n/d) Art_{L|K}(I).
pub fn bockstein(ctx: &CohomologyCtx, x: &H1Class) -> Result<H2Class> {
    if x.is_trivial() {
        return Ok(H2Class::zero(ctx));
    }
    if !x.ext.is_unramified_everywhere() {
        return Err(Error::RamifiedExtension);
    }
    let mut values = Vec::with_capacity(ctx.ext1.gens.len());
    for g in &ctx.ext1.gens {
        values.push(big(x.chi(&g.ideal)? as i64));
    }
    H2Class::new(ctx, values)
}

/// Cup product H^1 x H^1 -> H^2, evaluated on every presentation
/// generator (a, I) through the constructive pipeline: split I^{n/d} O_L
/// as J - sigma(J) + div(t) with N(t) = a^{-1}, then pair y with
/// (n/d) N(J) + kappa(n, d) I.
pub fn cup_11(
    ctx: &CohomologyCtx,
    x: &H1Class,
    y: &H1Class,
    top: &TopData,
    seed: u64,
) -> Result<H2Class> {
    let n = ctx.n;
    if x.is_trivial() {
        return Ok(H2Class::zero(ctx));
    }
    let ext = &x.ext;
    let d = ext.rel_degree;
    let nd = (n / d) as i64;
    let kap = kappa(n, d) as i64;
    let mut values = Vec::with_capacity(ctx.ext1.gens.len());
    for g in &ctx.ext1.gens {
        let e_ideal = ext.extend_ideal(&ctx.field.ideal_pow(&g.ideal, nd));
        let (bp, t1) = ext.furtwangler_split(&e_ideal, &top.cls)?;
        // Adjust t1 so its norm is exactly a^{-1}.
        let nt = ext.relative_norm(&t1)?;
        let u = ctx.field.mul(&nt, &g.a);
        let wu = ext.solve_norm_unit(&u, &top.units, seed)?;
        let t = ext.top.div(&t1, &wu)?;
        let mut j_ideal = bp;
        let dw = ext.top.principal_ideal(&wu)?;
        if !ext.top.ideal_is_unit(&dw) {
            let c = ext.hilbert90_ideal(&dw)?;
            j_ideal = ext.top.ideal_mul(&j_ideal, &c);
        }
        // Exact residual identities.
        let a_inv = ctx.field.invert(&g.a)?;
        assert_eq!(ext.relative_norm(&t)?, a_inv, "norm of the witness t");
        let recon = ext.top.ideal_mul(
            &ext
                .top
                .ideal_mul(&j_ideal, &ext.top.ideal_inverse(&ext.sigma_ideal(&j_ideal))),
            &ext.top.principal_ideal(&t)?,
        );
        assert_eq!(recon, e_ideal, "splitting identity");
        let nj = ext.relative_norm_ideal(&j_ideal)?;
        let arg = ctx.field.ideal_mul(
            &ctx.field.ideal_pow(&nj, nd),
            &ctx.field.ideal_pow(&g.ideal, kap),
        );
        values.push(big(y.chi(&arg)? as i64));
    }
    H2Class::new(ctx, values)
}

/// Cup product H^1 x H^2 -> H^3: with b from Hilbert 90 for
/// zeta^{n/d}, the value on zeta is y(b^{-n}, I) where I O_L = div(b).
pub fn cup_12(ctx: &CohomologyCtx, x: &H1Class, y: &H2Class, seed: u64) -> Result<H3Class> {
    let n = ctx.n;
    if x.is_trivial() {
        return Ok(H3Class {
            value: BigInt::zero(),
            n,
        });
    }
    let ext = &x.ext;
    let d = ext.rel_degree;
    let xi_pow = ctx.field.pow(&ctx.mu_gen, (n / d) as i64)?;
    let u = ext.embed(&xi_pow);
    let b = ext.hilbert90_element(&u, seed)?;
    let a_l = ext.top.pow(&b, -(n as i64))?;
    let a = ext.to_base(&a_l)?;
    let ideal = ext.descend_ideal(&ext.top.principal_ideal(&b)?)?;
    let value = y.evaluate(ctx, &Ext1Class { a, ideal })?;
    Ok(H3Class { value, n })
}

/// The Kummer shortcut for cup_12: for x built from (K, n, v), the value
/// is y(v^{-1}, I) with n I = div(v), where v is recovered exactly as
/// w^{n/d} from the stored radicand.
pub fn cup_12_kummer(ctx: &CohomologyCtx, x: &H1Class, y: &H2Class) -> Result<H3Class> {
    let n = ctx.n;
    if x.is_trivial() {
        return Ok(H3Class {
            value: BigInt::zero(),
            n,
        });
    }
    let w = x
        .ext
        .kummer_w
        .as_ref()
        .ok_or_else(|| Error::Parse("not a Kummer-built extension".into()))?;
    let d = x.ext.rel_degree;
    let v1 = ctx.field.pow(w, (n / d) as i64)?;
    let a = ctx.field.invert(&v1)?;
    let ideal = ctx
        .field
        .nth_root_ideal(&ctx.field.principal_ideal(&v1)?, n)?;
    let value = y.evaluate(ctx, &Ext1Class { a, ideal })?;
    Ok(H3Class { value, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;
    use num_bigint::RandBigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx_qm5() -> CohomologyCtx {
        let k = NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap();
        CohomologyCtx::new(k, 2, 1).unwrap()
    }

    fn x_ki(ctx: &CohomologyCtx) -> H1Class {
        let v = ctx.field.from_i64(-1);
        H1Class {
            ext: CyclicExtension::build_kummer(&ctx.field, 2, &v).unwrap(),
        }
    }

    fn random_elt(k: &NumberField, rng: &mut ChaCha8Rng) -> FieldElement {
        loop {
            let coords: Vec<BigInt> = (0..k.degree)
                .map(|_| rng.gen_bigint_range(&big(-6), &big(7)))
                .collect();
            let x = k.elt(coords, BigInt::one());
            if !x.is_zero() {
                return x;
            }
        }
    }

    #[test]
    fn group_orders_qm5() {
        let ctx = ctx_qm5();
        // mu_2 = {+-1}; U/U^2 x Cl[2] has order 4; Cl/2 has order 2.
        assert_eq!(ctx.ext_group(0).unwrap().order(), big(2));
        assert_eq!(ctx.ext_group(1).unwrap().order(), big(4));
        assert_eq!(ctx.ext_group(2).unwrap().order(), big(2));
        assert_eq!(ctx.ext_group(3).unwrap().order(), big(2));
        // Duality: |H^i| = |Ext^{3-i}|; zero above degree 3.
        for i in 0..=3 {
            assert_eq!(
                ctx.h_group(i).unwrap().order(),
                ctx.ext_group(3 - i).unwrap().order()
            );
        }
        assert!(ctx.h_group(4).unwrap().is_trivial());
    }

    #[test]
    fn group_orders_eisenstein_cubic_modulus() {
        // Q(sqrt(-3)), n = 3: U/U^3 = <zeta_6> image of order 3, h = 1.
        let k = NumberField::make(IntPoly::from_i64(&[3, 0, 1])).unwrap();
        let ctx = CohomologyCtx::new(k, 3, 1).unwrap();
        assert_eq!(ctx.ext_group(0).unwrap().order(), big(3));
        assert_eq!(ctx.ext_group(1).unwrap().order(), big(3));
        assert_eq!(ctx.ext_group(2).unwrap().order(), big(1));
        assert_eq!(ctx.ext_group(3).unwrap().order(), big(3));
    }

    #[test]
    fn scope_gate_for_real_fields() {
        // x^3 - 2 has a real embedding: n = 2 is out of scope, n = 3 fine.
        let k = NumberField::make(IntPoly::from_i64(&[-2, 0, 0, 1])).unwrap();
        let c2 = CohomologyCtx::new(k.clone(), 2, 1).unwrap();
        assert!(matches!(c2.h_group(1), Err(Error::ScopeViolation)));
        let c3 = CohomologyCtx::new(k, 3, 1).unwrap();
        assert!(c3.h_group(1).is_ok());
    }

    #[test]
    fn ext1_reduction_canonical_forms() {
        let ctx = ctx_qm5();
        let k = &ctx.field;
        // (1, (1)) reduces to zero.
        let triv = Ext1Class {
            a: k.one(),
            ideal: k.unit_ideal(),
        };
        let z = ctx.ext1_reduce(&triv).unwrap();
        assert!(z.iter().all(|c| c.is_zero()));
        // B1 elements reduce to zero.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..6 {
            let b = random_elt(k, &mut rng);
            let c = ctx.b1_class(&b).unwrap();
            let z = ctx.ext1_reduce(&c).unwrap();
            assert!(z.iter().all(|x| x.is_zero()), "B1 must vanish");
        }
        // (-1, (1)) is nonzero: -1 is not a square times a unit square.
        let minus = Ext1Class {
            a: k.from_i64(-1),
            ideal: k.unit_ideal(),
        };
        let z = ctx.ext1_reduce(&minus).unwrap();
        assert!(z.iter().any(|x| !x.is_zero()));
        // A non-cocycle is rejected.
        let bad = Ext1Class {
            a: k.from_i64(2),
            ideal: k.unit_ideal(),
        };
        assert!(matches!(ctx.check_z1(&bad), Err(Error::NotInZ1)));
    }

    #[test]
    fn bockstein_values() {
        let ctx = ctx_qm5();
        let x = x_ki(&ctx);
        let beta = bockstein(&ctx, &x).unwrap();
        // Unit generators carry the trivial ideal: value 0. The class
        // generator carries a nonprincipal 2-torsion ideal: value 1.
        for j in 0..ctx.ext1.num_unit_gens {
            assert!(beta.values[j].is_zero());
        }
        assert_eq!(beta.values[ctx.ext1.num_unit_gens], big(1));
        // Evaluation at a pair with principal ideal part is 0.
        let k = &ctx.field;
        let s = k.add(&k.one(), &k.theta());
        let c = Ext1Class {
            a: k.pow(&k.invert(&s).unwrap(), 2).unwrap(),
            ideal: k.principal_ideal(&s).unwrap(),
        };
        assert_eq!(beta.evaluate(&ctx, &c).unwrap(), BigInt::zero());
    }

    #[test]
    fn cup12_matches_kummer_shortcut() {
        let ctx = ctx_qm5();
        // x from v = 5: L = K(sqrt 5) = K(i), div(5) = 2 p5.
        let x = H1Class {
            ext: CyclicExtension::build_kummer(&ctx.field, 2, &ctx.field.from_i64(5)).unwrap(),
        };
        assert!(x.ext.is_unramified_everywhere());
        // Dual-basis functional: 1 on the torsion unit generator.
        let mut vals = vec![BigInt::zero(); ctx.ext1.gens.len()];
        vals[0] = big(1);
        let y = H2Class::new(&ctx, vals).unwrap();
        let general = cup_12(&ctx, &x, &y, 7).unwrap();
        let shortcut = cup_12_kummer(&ctx, &x, &y).unwrap();
        assert_eq!(general, shortcut);
        // The value is nonzero: (5^{-1}, p5) has unit part -1 after
        // stripping the principal p5 = (theta).
        assert_eq!(general.value, big(1));
        // Witness independence across seeds.
        for seed in [11, 23, 35] {
            assert_eq!(cup_12(&ctx, &x, &y, seed).unwrap(), general);
        }
    }

    #[test]
    fn cup11_well_defined_and_stable() {
        let ctx = ctx_qm5();
        let x = x_ki(&ctx);
        let top = top_data(&x.ext, 3).unwrap();
        let c1 = cup_11(&ctx, &x, &x, &top, 1).unwrap();
        // Reseeded witnesses give the identical table.
        for seed in [5, 9] {
            assert_eq!(cup_11(&ctx, &x, &x, &top, seed).unwrap(), c1);
        }
        // Well-definedness was already asserted by the constructor; also
        // evaluate at random B1 elements.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let b = random_elt(&ctx.field, &mut rng);
            let cls = ctx.b1_class(&b).unwrap();
            assert_eq!(c1.evaluate(&ctx, &cls).unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn trivial_classes_cup_to_zero() {
        let ctx = ctx_qm5();
        let x_triv = H1Class {
            ext: CyclicExtension::build_kummer(&ctx.field, 2, &ctx.field.from_i64(4)).unwrap(),
        };
        assert!(x_triv.is_trivial());
        let y = bockstein(&ctx, &x_triv).unwrap();
        assert!(y.is_zero());
        let z = cup_12(&ctx, &x_triv, &y, 1).unwrap();
        assert!(z.value.is_zero());
    }
}
