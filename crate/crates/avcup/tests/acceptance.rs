//! Acceptance suite: ten end-to-end checks of the cohomology pipeline
//! against independent desk-scale oracles. Each test prints exactly one
//! PASS/FAIL line; a FAIL line is followed by a panic so the harness
//! records it. The tests serialize on a global lock so the wall-clock
//! budgets are measured without cross-test contention.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use avcup::arith::big;
use avcup::classunit::{class_group, unit_group, ClassGroup};
use avcup::cohomology::{
    bockstein, cup_11, cup_12, cup_12_kummer, top_data, CohomologyCtx, H1Class, H2Class,
};
use avcup::ext::CyclicExtension;
use avcup::kim::{
    fundamental_discs, norm_image_contains, quadratic_poly, scan, v_candidates, ScanConfig,
};
use avcup::nf::{FieldElement, NumberField};
use avcup::parse::{parse_element, parse_int_poly};
use avcup::poly::IntPoly;
use avcup::Error;

static SERIAL: Mutex<()> = Mutex::new(());

fn report(num: u32, name: &str, body: impl FnOnce() -> Result<(), String>) {
    let guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let outcome = body();
    drop(guard);
    match outcome {
        Ok(()) => println!("criterion {num:02} ({name}): PASS"),
        Err(msg) => {
            println!("criterion {num:02} ({name}): FAIL - {msg}");
            panic!("criterion {num:02} ({name}) failed: {msg}");
        }
    }
}

/// Independent class-number oracle for an imaginary quadratic field:
/// count reduced primitive binary quadratic forms (a, b, c) of the given
/// discriminant, i.e. -a < b <= a <= c with b >= 0 whenever a == c.
fn form_class_number(d: i64) -> u64 {
    assert!(d < 0 && (d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1));
    let mut h = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a {
                continue;
            }
            if a == c && b < 0 {
                continue;
            }
            let g = gcd3(a.unsigned_abs(), b.unsigned_abs(), c.unsigned_abs());
            if g == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    a.gcd(&b).gcd(&c)
}

fn quadratic_field(d: i64) -> NumberField {
    NumberField::make(quadratic_poly(d)).expect("irreducible quadratic")
}

fn product(v: &[BigInt]) -> BigInt {
    v.iter().product()
}

/// The value table of an H2 functional on the Z1/B1 generators, taken
/// through the evaluation path (raw coordinates), not the stored table.
fn h2_table(ctx: &CohomologyCtx, z: &H2Class) -> Vec<BigInt> {
    ctx.ext1
        .gens
        .iter()
        .map(|g| z.evaluate(ctx, g).expect("generator evaluates"))
        .collect()
}

/// The quartic corpus field: a totally imaginary quartic containing the
/// cube roots of unity with class group Z/3.
fn quartic_field() -> NumberField {
    NumberField::make(IntPoly::from_i64(&[400, 0, 52, 0, 1])).expect("irreducible quartic")
}

/// Search the quartic field's cube-class/unit candidates for an
/// everywhere-unramified cubic radicand.
fn quartic_unramified_cubic(ctx: &CohomologyCtx) -> Option<CyclicExtension> {
    let ng = ctx.ext1.num_unit_gens;
    let a_c = ctx.ext1.gens[ng].a.clone();
    for eps in 0..2i64 {
        for i in 0..3i64 {
            for j in 0..3i64 {
                if eps == 0 && i == 0 && j == 0 {
                    continue;
                }
                let mut v = ctx.field.pow(&a_c, eps).unwrap();
                v = ctx.field.mul(&v, &ctx.field.pow(&ctx.mu_gen, i).unwrap());
                if let Some(f) = ctx.units.fundamental.first() {
                    v = ctx.field.mul(&v, &ctx.field.pow(f, j).unwrap());
                } else if j > 0 {
                    continue;
                }
                if let Ok(e) = CyclicExtension::build_kummer(&ctx.field, 3, &v) {
                    if e.rel_degree == 3 && e.is_unramified_everywhere() {
                        return Some(e);
                    }
                }
            }
        }
    }
    None
}

#[test]
fn criterion_01_class_group_oracle() {
    report(1, "class numbers vs reduced-form oracle", || {
        let t0 = Instant::now();
        // Field-discriminant convention: minimal polynomials of the
        // maximal order for every fundamental discriminant.
        for d in fundamental_discs(-200, -3) {
            let k = quadratic_field(d);
            if k.disc != big(d) {
                return Err(format!("field for {d} has discriminant {}", k.disc));
            }
            let h = class_group(&k, 1).map_err(|e| e.to_string())?.h;
            let oracle = big(form_class_number(d) as i64);
            if h != oracle {
                return Err(format!("disc {d}: computed h = {h}, oracle {oracle}"));
            }
        }
        // Polynomial-discriminant convention: x^2 + m with m = 3 mod 4
        // has polynomial discriminant -4m but field discriminant -m; the
        // class number must match the field convention.
        for m in [3i64, 7, 11, 15, 19, 23, 35, 47] {
            let k = NumberField::make(IntPoly::from_i64(&[m, 0, 1])).map_err(|e| e.to_string())?;
            if k.disc != big(-m) {
                return Err(format!("x^2+{m}: field discriminant is {}", k.disc));
            }
            let h = class_group(&k, 1).map_err(|e| e.to_string())?.h;
            let oracle = big(form_class_number(-m) as i64);
            if h != oracle {
                return Err(format!("x^2+{m}: computed h = {h}, oracle {oracle}"));
            }
        }
        let spent = t0.elapsed();
        if spent > Duration::from_secs(60) {
            return Err(format!("runtime budget exceeded: {spent:?} > 60s"));
        }
        Ok(())
    });
}

#[test]
fn criterion_02_ext1_order_identity() {
    report(2, "|Z1/B1| = |U/U^n| * |Cl[n]|", || {
        for d in fundamental_discs(-200, -3) {
            for n in [2u64, 3] {
                let ctx = CohomologyCtx::new(quadratic_field(d), n, 1).map_err(|e| e.to_string())?;
                let lhs = product(&ctx.ext1.invariants);
                // Independent side: torsion order from the roots of
                // unity, n-torsion of a freshly seeded class group.
                let k2 = quadratic_field(d);
                let (w, _) = k2.roots_of_unity().map_err(|e| e.to_string())?;
                let cls2 = class_group(&k2, 7).map_err(|e| e.to_string())?;
                let mut rhs = big(w.gcd(&n) as i64);
                for di in &cls2.invariants {
                    rhs *= di.gcd(&big(n as i64));
                }
                if lhs != rhs {
                    return Err(format!("disc {d}, n = {n}: |Z1/B1| = {lhs}, product formula {rhs}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_duality_table() {
    report(3, "duality table of H^i orders", || {
        for d in fundamental_discs(-200, -3) {
            for n in [2u64, 3] {
                let ctx = CohomologyCtx::new(quadratic_field(d), n, 1).map_err(|e| e.to_string())?;
                let nn = big(n as i64);
                let h0 = ctx.h_group(0).map_err(|e| e.to_string())?.order();
                if h0 != nn {
                    return Err(format!("disc {d}, n = {n}: |H0| = {h0}"));
                }
                let mut cl_mod_n = BigInt::one();
                for di in &ctx.cls.invariants {
                    cl_mod_n *= di.gcd(&nn);
                }
                let h1 = ctx.h_group(1).map_err(|e| e.to_string())?.order();
                if h1 != cl_mod_n {
                    return Err(format!("disc {d}, n = {n}: |H1| = {h1}, |Cl/n| = {cl_mod_n}"));
                }
                let h2 = ctx.h_group(2).map_err(|e| e.to_string())?.order();
                let z1b1 = product(&ctx.ext1.invariants);
                if h2 != z1b1 {
                    return Err(format!("disc {d}, n = {n}: |H2| = {h2}, |Z1/B1| = {z1b1}"));
                }
                let h3 = ctx.h_group(3).map_err(|e| e.to_string())?.order();
                if h3 != big(ctx.mu_order as i64) {
                    return Err(format!("disc {d}, n = {n}: |H3| = {h3}, |mu_n| = {}", ctx.mu_order));
                }
                for i in 4..=6 {
                    if !ctx.h_group(i).map_err(|e| e.to_string())?.is_trivial() {
                        return Err(format!("disc {d}, n = {n}: H^{i} nontrivial"));
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_04_witness_independence() {
    report(4, "cup tables stable across reseeded runs", || {
        // Part A: the imaginary quadratic corpus field and its
        // unramified quadratic extension.
        let ctx = CohomologyCtx::new(
            NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap(),
            2,
            1,
        )
        .map_err(|e| e.to_string())?;
        let ext = CyclicExtension::build_kummer(&ctx.field, 2, &ctx.field.from_i64(-1))
            .map_err(|e| e.to_string())?;
        let x = H1Class { ext };
        let top = top_data(&x.ext, 1).map_err(|e| e.to_string())?;
        let beta = bockstein(&ctx, &x).map_err(|e| e.to_string())?;
        let mut cup11_ref: Option<Vec<BigInt>> = None;
        let mut cup12_ref: Option<BigInt> = None;
        for seed in 1..=10u64 {
            let z = cup_11(&ctx, &x, &x, &top, seed).map_err(|e| e.to_string())?;
            match &cup11_ref {
                None => cup11_ref = Some(z.values.clone()),
                Some(r) if *r != z.values => {
                    return Err(format!("cup_11 seed {seed}: table {:?} != {:?}", z.values, r))
                }
                _ => {}
            }
            let w = cup_12(&ctx, &x, &beta, seed).map_err(|e| e.to_string())?;
            match &cup12_ref {
                None => cup12_ref = Some(w.value.clone()),
                Some(r) if *r != w.value => {
                    return Err(format!("cup_12 seed {seed}: {} != {r}", w.value))
                }
                _ => {}
            }
        }
        // Part B: the quartic corpus field with class group Z/3 and its
        // unramified cubic extension; cup_12 across reseeded runs plus
        // the direct Kummer evaluation.
        let qctx = CohomologyCtx::new(quartic_field(), 3, 1).map_err(|e| e.to_string())?;
        let qext = quartic_unramified_cubic(&qctx)
            .ok_or_else(|| "no unramified cubic radicand found".to_string())?;
        let qx = H1Class { ext: qext };
        let qbeta = bockstein(&qctx, &qx).map_err(|e| e.to_string())?;
        let shortcut = cup_12_kummer(&qctx, &qx, &qbeta).map_err(|e| e.to_string())?;
        for seed in 1..=10u64 {
            let w = cup_12(&qctx, &qx, &qbeta, seed).map_err(|e| e.to_string())?;
            if w.value != shortcut.value {
                return Err(format!(
                    "quartic cup_12 seed {seed}: {} != direct value {}",
                    w.value, shortcut.value
                ));
            }
        }
        // Part C: the quartic cup_11 table needs the unit group of the
        // degree-12 top field. Its unit rank is 5; the unit-group solver
        // is exact only up to rank 2, and the best-effort witness
        // searches do not terminate at this lattice size. This sub-part
        // is therefore reported as an honest failure rather than being
        // approximated.
        match unit_group(&qx.ext.top, &ClassGroup::assumed_trivial(), 1) {
            Err(Error::RankTooLarge(r)) => Err(format!(
                "parts A and B passed; quartic cup_11 table is out of reach: \
                 the degree-12 top field has unit rank {r}, above the supported bound of 2, \
                 so no exact witness basis for the norm equations exists at desk scale"
            )),
            Err(e) => Err(format!("parts A and B passed; quartic unit group failed: {e}")),
            Ok(_) => {
                // If a future unit-group solver handles rank 5, finish
                // the check for real.
                let qtop = top_data(&qx.ext, 1).map_err(|e| e.to_string())?;
                let mut r: Option<Vec<BigInt>> = None;
                for seed in 1..=10u64 {
                    let z = cup_11(&qctx, &qx, &qx, &qtop, seed).map_err(|e| e.to_string())?;
                    match &r {
                        None => r = Some(z.values.clone()),
                        Some(t) if *t != z.values => {
                            return Err(format!("quartic cup_11 seed {seed} differs"))
                        }
                        _ => {}
                    }
                }
                Ok(())
            }
        }
    });
}

#[test]
fn criterion_05_well_definedness() {
    report(5, "cup_11 and bockstein vanish on B1", || {
        let ctx = CohomologyCtx::new(
            NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap(),
            2,
            1,
        )
        .map_err(|e| e.to_string())?;
        let ext = CyclicExtension::build_kummer(&ctx.field, 2, &ctx.field.from_i64(-1))
            .map_err(|e| e.to_string())?;
        let x = H1Class { ext };
        let top = top_data(&x.ext, 1).map_err(|e| e.to_string())?;
        let cup = cup_11(&ctx, &x, &x, &top, 1).map_err(|e| e.to_string())?;
        let beta = bockstein(&ctx, &x).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(0xb1b1_0005);
        let mut tried = 0;
        while tried < 50 {
            let coords: Vec<BigInt> = (0..ctx.field.degree)
                .map(|_| big(rng.gen_range(-9i64..=9)))
                .collect();
            let den = big(rng.gen_range(1i64..=4));
            let b = ctx.field.elt(coords, den);
            if b.is_zero() {
                continue;
            }
            tried += 1;
            let c = ctx.b1_class(&b).map_err(|e| e.to_string())?;
            let vc = cup.evaluate(&ctx, &c).map_err(|e| e.to_string())?;
            if !vc.is_zero() {
                return Err(format!("cup_11 functional is {vc} on a B1 element"));
            }
            let vb = beta.evaluate(&ctx, &c).map_err(|e| e.to_string())?;
            if !vb.is_zero() {
                return Err(format!("bockstein functional is {vb} on a B1 element"));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_solver_round_trips() {
    report(6, "witness solvers: 25 exact round trips each", || {
        let k = NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap();
        let ext = CyclicExtension::build_kummer(&k, 2, &k.from_i64(-1)).map_err(|e| e.to_string())?;
        let td = top_data(&ext, 3).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x50_1e_45);
        let rand_elt = |rng: &mut ChaCha8Rng, deg: usize| -> FieldElement {
            loop {
                let coords: Vec<BigInt> = (0..deg).map(|_| big(rng.gen_range(-5i64..=5))).collect();
                let e = ext.top.elt(coords, BigInt::one());
                if !e.is_zero() {
                    return e;
                }
            }
        };
        let deg = ext.top.degree;
        for trial in 0..25u64 {
            // hilbert90_element: u = sigma(c)/c has norm one; recover b
            // with sigma(b)/b = u.
            let c = rand_elt(&mut rng, deg);
            let u = ext
                .top
                .div(&ext.apply_sigma(&c), &c)
                .map_err(|e| e.to_string())?;
            let b = ext.hilbert90_element(&u, trial).map_err(|e| e.to_string())?;
            let back = ext
                .top
                .div(&ext.apply_sigma(&b), &b)
                .map_err(|e| e.to_string())?;
            if back != u {
                return Err(format!("hilbert90_element trial {trial}: residual mismatch"));
            }

            // hilbert90_ideal: J = I / sigma(I); recover an ideal with
            // the same quotient.
            let i_ideal = ext
                .top
                .principal_ideal(&rand_elt(&mut rng, deg))
                .map_err(|e| e.to_string())?;
            let j = ext
                .top
                .ideal_mul(&i_ideal, &ext.top.ideal_inverse(&ext.sigma_ideal(&i_ideal)));
            let rec = ext.hilbert90_ideal(&j).map_err(|e| e.to_string())?;
            let back = ext
                .top
                .ideal_mul(&rec, &ext.top.ideal_inverse(&ext.sigma_ideal(&rec)));
            if back != j {
                return Err(format!("hilbert90_ideal trial {trial}: residual mismatch"));
            }

            // furtwangler_split: M = (c) * B0 / sigma(B0) has trivial
            // norm class; recover (B, a) with M = B / sigma(B) * (a).
            let b0 = if td.cls.generators.is_empty() {
                ext.top
                    .principal_ideal(&rand_elt(&mut rng, deg))
                    .map_err(|e| e.to_string())?
            } else {
                let g = &td.cls.generators[(trial as usize) % td.cls.generators.len()];
                ext.top.ideal_mul(
                    g,
                    &ext.top
                        .principal_ideal(&rand_elt(&mut rng, deg))
                        .map_err(|e| e.to_string())?,
                )
            };
            let m_ideal = ext.top.ideal_mul(
                &ext.top
                    .principal_ideal(&rand_elt(&mut rng, deg))
                    .map_err(|e| e.to_string())?,
                &ext.top
                    .ideal_mul(&b0, &ext.top.ideal_inverse(&ext.sigma_ideal(&b0))),
            );
            let (b_ideal, a) = ext
                .furtwangler_split(&m_ideal, &td.cls)
                .map_err(|e| e.to_string())?;
            let recon = ext.top.ideal_mul(
                &ext.top
                    .ideal_mul(&b_ideal, &ext.top.ideal_inverse(&ext.sigma_ideal(&b_ideal))),
                &ext.top.principal_ideal(&a).map_err(|e| e.to_string())?,
            );
            if recon != m_ideal {
                return Err(format!("furtwangler_split trial {trial}: residual mismatch"));
            }

            // solve_norm_unit: u = N(t) for a random unit t of the top
            // field; recover any w with N(w) = u.
            let mut t = ext
                .top
                .pow(&td.units.torsion_gen, rng.gen_range(0i64..td.units.torsion_order as i64))
                .map_err(|e| e.to_string())?;
            for f in &td.units.fundamental {
                let e = rng.gen_range(-3i64..=3);
                t = ext.top.mul(&t, &ext.top.pow(f, e).map_err(|e| e.to_string())?);
            }
            let u = ext.relative_norm(&t).map_err(|e| e.to_string())?;
            let w = ext
                .solve_norm_unit(&u, &td.units, trial)
                .map_err(|e| e.to_string())?;
            let nu = ext.relative_norm(&w).map_err(|e| e.to_string())?;
            if nu != u {
                return Err(format!("solve_norm_unit trial {trial}: residual mismatch"));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_07_kim_scan_equivalence() {
    report(7, "scan vs norm-image oracle, |disc| <= 500", || {
        let t0 = Instant::now();
        let cfg = ScanConfig {
            disc_lo: -500,
            disc_hi: -3,
            n: 2,
            seed: 1,
            cache: None,
        };
        let records = scan(&cfg).map_err(|e| e.to_string())?;
        if records.is_empty() {
            return Err("scan produced no records".into());
        }
        let mut non_vanishing = 0usize;
        for rec in &records {
            if rec.status != "ok" {
                return Err(format!(
                    "job disc {} v {}: status {} ({:?})",
                    rec.disc, rec.v, rec.status, rec.error
                ));
            }
            if rec.trivial == Some(true) {
                continue;
            }
            let vanishes = rec.vanishes.expect("ok record");
            let cup: BigInt = rec.cup_value.as_ref().expect("ok record").parse().unwrap();
            if vanishes != cup.is_zero() {
                return Err(format!(
                    "disc {} v {}: vanishes = {vanishes} but cup value {cup}",
                    rec.disc, rec.v
                ));
            }
            if !vanishes {
                non_vanishing += 1;
            }
            // Independent oracle: rebuild the job and enumerate the norm
            // image of the top class group exhaustively.
            let poly = parse_int_poly(&rec.poly).map_err(|e| e.to_string())?;
            let k = NumberField::make(poly).map_err(|e| e.to_string())?;
            let ctx = CohomologyCtx::new(k, 2, 1).map_err(|e| e.to_string())?;
            let v = parse_element(&ctx.field, &rec.v).map_err(|e| e.to_string())?;
            let ext = CyclicExtension::build_kummer(&ctx.field, 2, &v).map_err(|e| e.to_string())?;
            let div_v = ctx.field.principal_ideal(&v).map_err(|e| e.to_string())?;
            let a_ideal = ctx
                .field
                .nth_root_ideal(&ctx.field.ideal_inverse(&div_v), 2)
                .map_err(|e| e.to_string())?;
            let cls_top = class_group(&ext.top, 5).map_err(|e| e.to_string())?;
            let in_image = norm_image_contains(&ctx, &ext, &cls_top, &a_ideal)
                .map_err(|e| e.to_string())?;
            if in_image != vanishes {
                return Err(format!(
                    "disc {} v {}: scan vanishes = {vanishes}, norm-image oracle = {in_image}",
                    rec.disc, rec.v
                ));
            }
        }
        if non_vanishing == 0 {
            return Err("no non-vanishing instance in the range".into());
        }
        let spent = t0.elapsed();
        if spent > Duration::from_secs(600) {
            return Err(format!("runtime budget exceeded: {spent:?} > 600s"));
        }
        Ok(())
    });
}

#[test]
fn criterion_08_bockstein_artin_identity() {
    report(8, "bockstein equals (n/d) * Artin on generators", || {
        // Imaginary quadratic corpus: every admissible quadratic
        // radicand of each field.
        for disc in [-15i64, -20, -84] {
            let ctx = CohomologyCtx::new(quadratic_field(disc), 2, 1).map_err(|e| e.to_string())?;
            for v_int in v_candidates(disc) {
                let v = ctx.field.from_i64(v_int);
                let ext = match CyclicExtension::build_kummer(&ctx.field, 2, &v) {
                    Ok(e) if e.rel_degree == 2 && e.is_unramified_everywhere() => e,
                    _ => continue,
                };
                check_bockstein_identity(&ctx, ext)
                    .map_err(|e| format!("disc {disc}, v = {v_int}: {e}"))?;
            }
        }
        // Quartic corpus field, n = 3.
        let qctx = CohomologyCtx::new(quartic_field(), 3, 1).map_err(|e| e.to_string())?;
        let qext = quartic_unramified_cubic(&qctx)
            .ok_or_else(|| "no unramified cubic radicand found".to_string())?;
        check_bockstein_identity(&qctx, qext).map_err(|e| format!("quartic field: {e}"))?;
        Ok(())
    });
}

fn check_bockstein_identity(ctx: &CohomologyCtx, ext: CyclicExtension) -> Result<(), String> {
    let n = ctx.n;
    let d = ext.rel_degree;
    let x = H1Class { ext };
    let beta = bockstein(ctx, &x).map_err(|e| e.to_string())?;
    for (i, g) in ctx.ext1.gens.iter().enumerate() {
        // Left side through the evaluation path (raw coordinates of the
        // generator), right side directly from the Artin symbol.
        let lhs = beta.evaluate(ctx, g).map_err(|e| e.to_string())?;
        let art = x.ext.artin_of_ideal(&g.ideal).map_err(|e| e.to_string())?;
        let rhs = big((((n / d) * art) % n) as i64);
        if lhs != rhs {
            return Err(format!(
                "generator {i}: bockstein value {lhs}, (n/d)*Art = {rhs}"
            ));
        }
        if i < ctx.ext1.num_unit_gens && !lhs.is_zero() {
            return Err(format!("unit generator {i} has nonzero bockstein value"));
        }
    }
    Ok(())
}

#[test]
fn criterion_09_kummer_shortcut_regression() {
    report(9, "cup_12 general path equals direct Kummer value", || {
        for disc in fundamental_discs(-100, -3) {
            let ctx = CohomologyCtx::new(quadratic_field(disc), 2, 1).map_err(|e| e.to_string())?;
            for v_int in v_candidates(disc) {
                let v = ctx.field.from_i64(v_int);
                let ext = match CyclicExtension::build_kummer(&ctx.field, 2, &v) {
                    Ok(e) if e.rel_degree == 2 && e.is_unramified_everywhere() => e,
                    _ => continue,
                };
                let x = H1Class { ext };
                let beta = bockstein(&ctx, &x).map_err(|e| e.to_string())?;
                let direct = cup_12_kummer(&ctx, &x, &beta).map_err(|e| e.to_string())?;
                for seed in [1u64, 7, 13] {
                    let general = cup_12(&ctx, &x, &beta, seed).map_err(|e| e.to_string())?;
                    if general.value != direct.value {
                        return Err(format!(
                            "disc {disc}, v = {v_int}, seed {seed}: general {} != direct {}",
                            general.value, direct.value
                        ));
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_commutativity_and_bilinearity() {
    report(10, "graded commutativity and bilinearity", || {
        // Discriminant -84: class group (Z/2)^2, three independent
        // unramified quadratic extensions with radicands -3, -4 and
        // their product 12.
        let ctx = CohomologyCtx::new(quadratic_field(-84), 2, 1).map_err(|e| e.to_string())?;
        let build = |v_int: i64| -> Result<(H1Class, avcup::cohomology::TopData), String> {
            let ext = CyclicExtension::build_kummer(&ctx.field, 2, &ctx.field.from_i64(v_int))
                .map_err(|e| e.to_string())?;
            if ext.rel_degree != 2 || !ext.is_unramified_everywhere() {
                return Err(format!("radicand {v_int} is not admissible"));
            }
            let x = H1Class { ext };
            let top = top_data(&x.ext, 1).map_err(|e| e.to_string())?;
            Ok((x, top))
        };
        let (x1, t1) = build(-3)?;
        let (x2, t2) = build(-4)?;
        let (x12, t12) = build(12)?;
        // The characters add: chi_{x12} = chi_{x1} + chi_{x2} on ideals.
        for p in [5i64, 11, 13, 17, 19, 23] {
            for pr in ctx
                .field
                .factor_rational_prime(&big(p))
                .map_err(|e| e.to_string())?
            {
                let c12 = x12.chi(&pr.ideal).map_err(|e| e.to_string())?;
                let c1 = x1.chi(&pr.ideal).map_err(|e| e.to_string())?;
                let c2 = x2.chi(&pr.ideal).map_err(|e| e.to_string())?;
                if c12 != (c1 + c2) % 2 {
                    return Err(format!(
                        "characters at a prime above {p}: {c12} != {c1} + {c2} mod 2"
                    ));
                }
            }
        }
        let pairs = [(&x1, &t1), (&x2, &t2), (&x12, &t12)];
        // Graded commutativity in degree (1,1): for n = 2 the sign is
        // trivial, so the tables must agree outright.
        for (xa, ta) in pairs {
            for (xb, tb) in pairs {
                let ab = cup_11(&ctx, xa, xb, ta, 1).map_err(|e| e.to_string())?;
                let ba = cup_11(&ctx, xb, xa, tb, 1).map_err(|e| e.to_string())?;
                if h2_table(&ctx, &ab) != h2_table(&ctx, &ba) {
                    return Err("cup_11 commutativity table mismatch".into());
                }
            }
        }
        // Bilinearity in each slot: x12 realizes x1 + x2.
        for (y, ty) in [(&x1, &t1), (&x2, &t2)] {
            let lhs = cup_11(&ctx, &x12, y, &t12, 1).map_err(|e| e.to_string())?;
            let r1 = cup_11(&ctx, &x1, y, &t1, 1).map_err(|e| e.to_string())?;
            let r2 = cup_11(&ctx, &x2, y, &t2, 1).map_err(|e| e.to_string())?;
            let sum: Vec<BigInt> = h2_table(&ctx, &r1)
                .iter()
                .zip(h2_table(&ctx, &r2))
                .map(|(a, b)| (a + b).mod_floor(&big(2)))
                .collect();
            if h2_table(&ctx, &lhs) != sum {
                return Err("first-slot additivity mismatch".into());
            }
            let lhs2 = cup_11(&ctx, y, &x12, ty, 1).map_err(|e| e.to_string())?;
            let s1 = cup_11(&ctx, y, &x1, ty, 1).map_err(|e| e.to_string())?;
            let s2 = cup_11(&ctx, y, &x2, ty, 1).map_err(|e| e.to_string())?;
            let sum2: Vec<BigInt> = h2_table(&ctx, &s1)
                .iter()
                .zip(h2_table(&ctx, &s2))
                .map(|(a, b)| (a + b).mod_floor(&big(2)))
                .collect();
            if h2_table(&ctx, &lhs2) != sum2 {
                return Err("second-slot additivity mismatch".into());
            }
        }
        // Informational only: compare <x cup x> with <bockstein(x)> (the
        // mod-2 Steenrod relation); report, do not fail.
        for (i, (x, t)) in pairs.iter().enumerate() {
            let sq = cup_11(&ctx, x, x, t, 1).map_err(|e| e.to_string())?;
            let b = bockstein(&ctx, x).map_err(|e| e.to_string())?;
            let agree = h2_table(&ctx, &sq) == h2_table(&ctx, &b);
            eprintln!(
                "note: square-vs-bockstein comparison for generator {i}: {}",
                if agree { "equal" } else { "different" }
            );
        }
        Ok(())
    });
}
