//! The seven subcommands: computation, rendering, and verdicts.

use clap::ValueEnum;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::Value;

use wps::counting::{self, PrimePower};
use wps::field::Field;
use wps::hypersurface::{self, WeightedPolynomial};
use wps::oracle;
use wps::weights::WeightVector;
use wps::zeta::{self, Stratum, ZetaFactorization};
use wps::Error;

use crate::output::{int_json, ints_json, object, Report, Sink, Table};
use crate::{Failure, FieldArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Subset,
    Burnside,
    Bruteforce,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StratumArg {
    Total,
    Smooth,
    Singular,
}

impl From<StratumArg> for Stratum {
    fn from(s: StratumArg) -> Stratum {
        match s {
            StratumArg::Total => Stratum::Total,
            StratumArg::Smooth => Stratum::Smooth,
            StratumArg::Singular => Stratum::Singular,
        }
    }
}

fn parse_weights(text: &str) -> Result<WeightVector, Failure> {
    text.parse::<WeightVector>().map_err(Failure::from)
}

fn weights_json(w: &WeightVector) -> Value {
    ints_json(w.weights().iter())
}

fn prime_power_json(q: &PrimePower) -> Value {
    object(vec![
        ("p", int_json(q.p())),
        ("alpha", int_json(q.alpha())),
        ("value", int_json(q.q())),
    ])
}

fn field_descriptor_json(field: &Field) -> Value {
    object(vec![
        ("p", int_json(field.p())),
        ("a", int_json(field.a())),
        ("modulus", ints_json(field.modulus().iter())),
        ("generator_index", int_json(field.generator())),
    ])
}

// ---------------------------------------------------------------- count

struct MethodOutcome {
    method: &'static str,
    total: BigUint,
    strata: Option<(BigUint, BigUint)>, // (singular, smooth)
    field: Option<Field>,
    tuples: Option<u64>,
}

pub fn count(
    weights: &str,
    field_arg: &FieldArg,
    method: MethodArg,
    limit: u64,
    sink: &Sink,
) -> Result<(), Failure> {
    let w = parse_weights(weights)?;
    let q = field_arg.resolve()?;

    let mut outcomes: Vec<MethodOutcome> = Vec::new();
    let mut skipped: Option<String> = None;
    let want = |m: MethodArg| method == m || method == MethodArg::All;

    if want(MethodArg::Subset) {
        let rep = counting::count_strata(&w, &q)?;
        outcomes.push(MethodOutcome {
            method: "subset",
            total: rep.total,
            strata: Some((rep.singular, rep.smooth)),
            field: None,
            tuples: None,
        });
    }
    if want(MethodArg::Burnside) {
        outcomes.push(MethodOutcome {
            method: "burnside",
            total: counting::count_burnside(&w, &q),
            strata: None,
            field: None,
            tuples: None,
        });
    }
    if want(MethodArg::Bruteforce) {
        match oracle::orbit_count(&w, &q, limit) {
            Ok(summary) => {
                let field = Field::new(q.p(), q.alpha(), limit)?;
                outcomes.push(MethodOutcome {
                    method: "bruteforce",
                    total: BigUint::from(summary.total_orbits),
                    strata: Some((
                        BigUint::from(summary.singular_orbits),
                        BigUint::from(summary.smooth_orbits),
                    )),
                    field: Some(field),
                    tuples: Some(summary.tuples_enumerated),
                });
            }
            Err(e @ Error::FieldTooLarge { .. }) if method == MethodArg::All => {
                skipped = Some(format!("bruteforce skipped: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    let totals_match = outcomes.windows(2).all(|p| p[0].total == p[1].total);
    let strata_match = {
        let strata: Vec<_> = outcomes.iter().filter_map(|o| o.strata.as_ref()).collect();
        strata.windows(2).all(|p| p[0] == p[1])
    };
    let verdict = totals_match && strata_match;

    let mut table = Table::new(&["method", "total", "singular", "smooth"]);
    for o in &outcomes {
        let (sing, smooth) = match &o.strata {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => ("-".into(), "-".into()),
        };
        table.row(vec![o.method.into(), o.total.to_string(), sing, smooth]);
    }
    let mut text = format!("weights {w}  q = {q} ({})\n{}", q.q(), table.render());
    if let Some(s) = &skipped {
        text.push_str(s);
        text.push('\n');
    }
    if method == MethodArg::All {
        text.push_str(if verdict { "verdict: MATCH\n" } else { "verdict: MISMATCH\n" });
    }

    let results: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            let mut entries = vec![
                ("method", Value::String(o.method.into())),
                ("total", int_json(&o.total)),
            ];
            if let Some((sing, smooth)) = &o.strata {
                entries.push(("singular", int_json(sing)));
                entries.push(("smooth", int_json(smooth)));
            }
            if let Some(field) = &o.field {
                entries.push(("field", field_descriptor_json(field)));
            }
            if let Some(t) = o.tuples {
                entries.push(("tuples_enumerated", int_json(t)));
            }
            object(entries)
        })
        .collect();
    let mut json_entries = vec![
        ("command", Value::String("count".into())),
        ("weights", weights_json(&w)),
        ("q", prime_power_json(&q)),
        ("results", Value::Array(results)),
    ];
    if method == MethodArg::All {
        json_entries.push(("match", Value::Bool(verdict)));
        if let Some(s) = &skipped {
            json_entries.push(("note", Value::String(s.clone())));
        }
    }

    sink.emit(&Report {
        table: text,
        json: object(json_entries),
        csv: Some(table.render_csv()),
    })?;

    if method == MethodArg::All && !verdict {
        return Err(Failure::Mismatch("counting methods disagree".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------- tower

pub fn tower(weights: &str, p: u64, max_exp: u32, sink: &Sink) -> Result<(), Failure> {
    let w = parse_weights(weights)?;
    if max_exp == 0 || max_exp > 64 {
        return Err(Failure::Input("--max-exp must be in 1..=64".into()));
    }
    let rows = counting::tower(&w, p, max_exp)?;

    let mut table = Table::new(&["a", "q", "singular", "smooth", "total"]);
    for r in &rows {
        table.row(vec![
            r.a.to_string(),
            r.q.to_string(),
            r.singular.to_string(),
            r.smooth.to_string(),
            r.total.to_string(),
        ]);
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            object(vec![
                ("a", int_json(r.a)),
                ("q", int_json(&r.q)),
                ("singular", int_json(&r.singular)),
                ("smooth", int_json(&r.smooth)),
                ("total", int_json(&r.total)),
            ])
        })
        .collect();

    sink.emit(&Report {
        table: format!("weights {w}  tower q = {p}^a\n{}", table.render()),
        json: object(vec![
            ("command", Value::String("tower".into())),
            ("weights", weights_json(&w)),
            ("p", int_json(p)),
            ("rows", Value::Array(json_rows)),
        ]),
        csv: Some(table.render_csv()),
    })
}

// ---------------------------------------------------------------- zeta

pub fn zeta(
    weights: &str,
    field_arg: &FieldArg,
    stratum: StratumArg,
    series: u32,
    sink: &Sink,
) -> Result<(), Failure> {
    let w = parse_weights(weights)?;
    let q = field_arg.resolve()?;
    if series > 64 {
        return Err(Failure::Input("--series is capped at 64".into()));
    }
    let stratum: Stratum = stratum.into();
    let z = ZetaFactorization::build(&w, &q, stratum)?;

    let degree = z.degree();
    let weight_sum = -BigInt::from(w.weight_sum());
    let degree_note = (stratum == Stratum::Total && degree != weight_sum).then(|| {
        format!(
            "NOTE: computed degree {degree} differs from -sum(w_i) = {weight_sum}; the \
             -sum(w_i) law assumes gcd(q, w_i) = 1 for all i"
        )
    });

    let expansion = z.expand_series(series as usize);
    let mut recovery = Vec::new();
    let mut all_pass = true;
    for r in 1..=series {
        let from_zeta = z.recover_count(r);
        let strata = counting::count_strata(&w, &q.extend(r))?;
        let direct = BigInt::from(match stratum {
            Stratum::Total => strata.total,
            Stratum::Smooth => strata.smooth,
            Stratum::Singular => strata.singular,
        });
        let pass = from_zeta == direct;
        all_pass &= pass;
        recovery.push((r, from_zeta, direct, pass));
    }

    let mut factor_table = Table::new(&["j", "o", "E"]);
    for (j, o, e) in z.factors() {
        factor_table.row(vec![j.to_string(), o.to_string(), e.to_string()]);
    }
    let mut roots_table = Table::new(&["j", "o", "multiplicity", "|1/t|"]);
    for root in z.poles_zeros() {
        roots_table.row(vec![
            root.j.to_string(),
            root.o.to_string(),
            root.multiplicity.to_string(),
            root.reciprocal_magnitude.to_string(),
        ]);
    }
    let mut recovery_table = Table::new(&["r", "from_zeta", "direct", "verdict"]);
    for (r, from_zeta, direct, pass) in &recovery {
        recovery_table.row(vec![
            r.to_string(),
            from_zeta.to_string(),
            direct.to_string(),
            if *pass { "PASS".into() } else { "FAIL".into() },
        ]);
    }

    let mut text = format!(
        "zeta of weights {w} over q = {q} ({}), stratum {stratum}\n\
         product of (1 - (q^j t)^o)^E over:\n{}",
        q.q(),
        factor_table.render()
    );
    text.push_str(&format!(
        "degree computed = {degree}   -sum(w_i) = {weight_sum}\n"
    ));
    if let Some(note) = &degree_note {
        text.push_str(note);
        text.push('\n');
    }
    text.push_str(&format!("poles/zeros:\n{}", roots_table.render()));
    let coeff_list = expansion
        .coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    text.push_str(&format!("series c_0..c_{series}: {coeff_list}\n"));
    text.push_str(&format!("count recovery:\n{}", recovery_table.render()));

    let factors_json: Vec<Value> = z
        .factors()
        .map(|(j, o, e)| {
            object(vec![
                ("j", int_json(j)),
                ("o", int_json(o)),
                ("E", int_json(e)),
            ])
        })
        .collect();
    let roots_json: Vec<Value> = z
        .poles_zeros()
        .iter()
        .map(|root| {
            object(vec![
                ("j", int_json(root.j)),
                ("o", int_json(root.o)),
                ("multiplicity", int_json(&root.multiplicity)),
                ("reciprocal_magnitude", int_json(&root.reciprocal_magnitude)),
            ])
        })
        .collect();
    let recovery_json: Vec<Value> = recovery
        .iter()
        .map(|(r, from_zeta, direct, pass)| {
            object(vec![
                ("r", int_json(r)),
                ("from_zeta", int_json(from_zeta)),
                ("direct", int_json(direct)),
                ("pass", Value::Bool(*pass)),
            ])
        })
        .collect();
    let mut json_entries = vec![
        ("command", Value::String("zeta".into())),
        ("weights", weights_json(&w)),
        (
            "factorization",
            object(vec![
                ("q", int_json(q.q())),
                ("stratum", Value::String(stratum.to_string())),
                ("factors", Value::Array(factors_json)),
            ]),
        ),
        ("degree", int_json(&degree)),
        ("degree_weight_sum", int_json(&weight_sum)),
        ("poles_zeros", Value::Array(roots_json)),
        (
            "series",
            object(vec![("coeffs", ints_json(expansion.coeffs().iter()))]),
        ),
        ("recovery", Value::Array(recovery_json)),
    ];
    if let Some(note) = &degree_note {
        json_entries.push(("degree_note", Value::String(note.clone())));
    }

    sink.emit(&Report {
        table: text,
        json: object(json_entries),
        csv: Some(factor_table.render_csv()),
    })?;

    if !all_pass {
        return Err(Failure::Mismatch("zeta count recovery failed".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------- normalize

pub fn normalize(
    weights: &str,
    field_arg: &FieldArg,
    series: Option<u32>,
    sink: &Sink,
) -> Result<(), Failure> {
    let w = parse_weights(weights)?;
    let q = field_arg.resolve()?;
    if let Some(r) = series {
        if r == 0 || r > 32 {
            return Err(Failure::Input("--series must be in 1..=32".into()));
        }
    }
    let rep = counting::normalization_relation(&w, &q)?;
    let (w_norm, _) = w.normalize();

    let mut table = Table::new(&["quantity", "value"]);
    table.row(vec!["d = gcd(w)".into(), rep.d.to_string()]);
    table.row(vec!["d' = gcd(d, q-1)".into(), rep.d_prime.to_string()]);
    table.row(vec![format!("count {w}"), rep.count_w.to_string()]);
    table.row(vec![format!("count {w_norm}"), rep.count_w_norm.to_string()]);
    table.row(vec!["correction".into(), rep.correction.to_string()]);
    table.row(vec!["error term".into(), rep.error_term.to_string()]);
    let mut text = format!("normalization of weights {w} over q = {q} ({})\n", q.q());
    text.push_str(&table.render());
    text.push_str(&format!(
        "relation count = d'*count' + (d'-1) - correction: {}\n",
        if rep.relation_holds { "HOLDS" } else { "VIOLATED" }
    ));

    let mut json_entries = vec![
        ("command", Value::String("normalize".into())),
        ("weights", weights_json(&w)),
        ("weights_normalized", weights_json(&w_norm)),
        ("q", prime_power_json(&q)),
        ("d", int_json(rep.d)),
        ("d_prime", int_json(rep.d_prime)),
        ("count", int_json(&rep.count_w)),
        ("count_normalized", int_json(&rep.count_w_norm)),
        ("correction", int_json(&rep.correction)),
        ("error_term", int_json(&rep.error_term)),
        ("relation_holds", Value::Bool(rep.relation_holds)),
    ];

    if let Some(order) = series {
        let cmp = zeta::normalization_zeta_compare(&w, &q, order as usize)?;
        let mut ext = Table::new(&["r", "gcd(d, q^r-1)", "E_r"]);
        for (i, e) in cmp.e_terms.iter().enumerate() {
            ext.row(vec![
                (i + 1).to_string(),
                cmp.d_r[i].to_string(),
                e.to_string(),
            ]);
        }
        text.push_str(&format!("extension error terms:\n{}", ext.render()));
        let zerr_text = cmp
            .zerr
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        text.push_str(&format!("Z_err coefficients c_0..c_{order}: {zerr_text}\n"));
        text.push_str(&format!(
            "zeta data equal up to r = {order}: {}\n",
            if cmp.equal { "yes" } else { "no" }
        ));

        let zerr_json: Vec<Value> = cmp
            .zerr
            .iter()
            .map(|c| {
                if c.is_integer() {
                    int_json(c.to_integer())
                } else {
                    Value::String(c.to_string())
                }
            })
            .collect();
        json_entries.push((
            "series",
            object(vec![
                ("E", ints_json(cmp.e_terms.iter())),
                ("d_r", ints_json(cmp.d_r.iter())),
                ("zerr_coeffs", Value::Array(zerr_json)),
                (
                    "zerr_integral",
                    Value::Bool(cmp.zerr_integer.is_some()),
                ),
                ("equal", Value::Bool(cmp.equal)),
            ]),
        ));
    }

    sink.emit(&Report {
        table: text,
        json: object(json_entries),
        csv: Some({
            let mut csv = Table::new(&["d", "d_prime", "count", "count_normalized", "error_term"]);
            csv.row(vec![
                rep.d.to_string(),
                rep.d_prime.to_string(),
                rep.count_w.to_string(),
                rep.count_w_norm.to_string(),
                rep.error_term.to_string(),
            ]);
            csv.render_csv()
        }),
    })?;

    if !rep.relation_holds {
        return Err(Failure::Mismatch("normalization relation violated".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------- scale

pub fn scale(
    weights: &str,
    gamma: u64,
    field_arg: &FieldArg,
    sink: &Sink,
) -> Result<(), Failure> {
    let w = parse_weights(weights)?;
    let q = field_arg.resolve()?;
    let rep = counting::scaling_difference(&w, gamma, &q)?;
    let agree = rep.difference == rep.formula_sum;

    let mut table = Table::new(&["quantity", "value"]);
    table.row(vec!["count original".into(), rep.count_original.to_string()]);
    table.row(vec!["count scaled".into(), rep.count_scaled.to_string()]);
    table.row(vec!["difference".into(), rep.difference.to_string()]);
    table.row(vec!["formula sum".into(), rep.formula_sum.to_string()]);
    let text = format!(
        "scaling weights {w} by gamma = {gamma} over q = {q} ({})\n{}verdict: {}\n",
        q.q(),
        table.render(),
        if agree { "AGREE" } else { "DISAGREE" }
    );

    sink.emit(&Report {
        table: text,
        json: object(vec![
            ("command", Value::String("scale".into())),
            ("weights", weights_json(&w)),
            ("gamma", int_json(gamma)),
            ("q", prime_power_json(&q)),
            ("count_original", int_json(&rep.count_original)),
            ("count_scaled", int_json(&rep.count_scaled)),
            ("difference", int_json(&rep.difference)),
            ("formula_sum", int_json(&rep.formula_sum)),
            ("agree", Value::Bool(agree)),
        ]),
        csv: Some({
            let mut csv =
                Table::new(&["gamma", "count_original", "count_scaled", "difference"]);
            csv.row(vec![
                gamma.to_string(),
                rep.count_original.to_string(),
                rep.count_scaled.to_string(),
                rep.difference.to_string(),
            ]);
            csv.render_csv()
        }),
    })?;

    if !agree {
        return Err(Failure::Mismatch(
            "scaling difference disagrees with the subset formula".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------- hypersurface

pub fn hypersurface(
    weights: &str,
    poly: &str,
    field_arg: &FieldArg,
    check_pch1: bool,
    limit: u64,
    sink: &Sink,
) -> Result<(), Failure> {
    let w = parse_weights(weights)?;
    let q = field_arg.resolve()?;
    let f = WeightedPolynomial::parse(poly, &w, q.p())?;

    let burnside = hypersurface::count_hypersurface_burnside(&f, &q, limit)?;
    let stratified = hypersurface::count_hypersurface_stratified(&f, &q, limit)?;
    let oracle_count = match oracle::hypersurface_orbit_count(&f, &q, limit) {
        Ok(c) => Some(BigUint::from(c)),
        Err(Error::FieldTooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut values = vec![burnside.clone(), stratified.clone()];
    values.extend(oracle_count.clone());
    let agree = values.windows(2).all(|p| p[0] == p[1]);

    let mut table = Table::new(&["method", "count"]);
    table.row(vec!["burnside".into(), burnside.to_string()]);
    table.row(vec!["stratified".into(), stratified.to_string()]);
    match &oracle_count {
        Some(c) => table.row(vec!["bruteforce".into(), c.to_string()]),
        None => table.row(vec!["bruteforce".into(), "(beyond limit)".into()]),
    }
    let mut text = format!(
        "hypersurface {f} = 0 in weights {w} over q = {q} ({}), degree {}\n{}verdict: {}\n",
        q.q(),
        f.degree(),
        table.render(),
        if agree { "MATCH" } else { "MISMATCH" }
    );

    let mut json_entries = vec![
        ("command", Value::String("hypersurface".into())),
        ("weights", weights_json(&w)),
        ("poly", Value::String(f.to_string())),
        ("degree", int_json(f.degree())),
        ("q", prime_power_json(&q)),
        ("count_burnside", int_json(&burnside)),
        ("count_stratified", int_json(&stratified)),
        (
            "count_bruteforce",
            oracle_count.as_ref().map_or(Value::Null, int_json),
        ),
        ("match", Value::Bool(agree)),
    ];

    let mut pch1_ok = true;
    if check_pch1 {
        let rep = hypersurface::pch1_check(&f, &q, limit)?;
        pch1_ok = rep.holds;
        text.push_str(&format!(
            "normalization relation (d = {}, d' = {}): |X| = {}, |X'| = {}, deficiency {} -> {}\n",
            rep.d,
            rep.d_prime,
            rep.count_w,
            rep.count_norm,
            rep.deficiency,
            if rep.holds { "HOLDS" } else { "VIOLATED" }
        ));
        json_entries.push((
            "pch1",
            object(vec![
                ("d", int_json(rep.d)),
                ("d_prime", int_json(rep.d_prime)),
                ("count", int_json(&rep.count_w)),
                ("count_normalized", int_json(&rep.count_norm)),
                ("deficiency", int_json(&rep.deficiency)),
                ("holds", Value::Bool(rep.holds)),
            ]),
        ));
    }

    sink.emit(&Report {
        table: text,
        json: object(json_entries),
        csv: Some(table.render_csv()),
    })?;

    if !agree {
        return Err(Failure::Mismatch("hypersurface methods disagree".into()));
    }
    if !pch1_ok {
        return Err(Failure::Mismatch(
            "hypersurface normalization relation violated".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------- verify

const CHECKS: [&str; 7] = [
    "formula-equivalence",
    "oracle",
    "fixed-point-audit",
    "zeta-recovery",
    "normalization",
    "scaling",
    "special-case",
];

#[derive(Default, Clone)]
struct Tally {
    pass: [u64; 7],
    fail: [u64; 7],
    notes: Vec<String>,
}

impl Tally {
    fn record(&mut self, check: usize, ok: bool, note: impl FnOnce() -> String) {
        if ok {
            self.pass[check] += 1;
        } else {
            self.fail[check] += 1;
            if self.notes.len() < 20 {
                self.notes.push(format!("{}: {}", CHECKS[check], note()));
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..7 {
            self.pass[i] += other.pass[i];
            self.fail[i] += other.fail[i];
        }
        self.notes.extend(other.notes);
        self.notes.truncate(20);
        self
    }
}

fn weight_sweep(n_plus_1: usize, max_w: u64) -> Vec<WeightVector> {
    let mut out = Vec::new();
    let mut current = vec![1u64; n_plus_1];
    loop {
        out.push(WeightVector::new(current.clone()).unwrap());
        let mut i = 0;
        while i < n_plus_1 {
            current[i] += 1;
            if current[i] <= max_w {
                break;
            }
            current[i] = 1;
            i += 1;
        }
        if i == n_plus_1 {
            return out;
        }
    }
}

fn verify_one(w: &WeightVector, qs: &[PrimePower], rmax: u32, limit: u64) -> Tally {
    let mut tally = Tally::default();
    for q in qs {
        let strata = counting::count_strata(w, q).expect("n is small");
        let burnside = counting::count_burnside(w, q);
        tally.record(
            0,
            burnside == strata.total && &strata.singular + &strata.smooth == strata.total,
            || format!("w={w} q={q}: subset {} burnside {burnside}", strata.total),
        );

        match oracle::orbit_count(w, q, limit) {
            Ok(orbit) => tally.record(
                1,
                BigUint::from(orbit.total_orbits) == strata.total
                    && BigUint::from(orbit.singular_orbits) == strata.singular
                    && BigUint::from(orbit.smooth_orbits) == strata.smooth,
                || format!("w={w} q={q}: oracle disagrees with formulas"),
            ),
            Err(Error::FieldTooLarge { .. }) => {}
            Err(e) => tally.record(1, false, || format!("w={w} q={q}: {e}")),
        }

        if q.q_u64().is_some_and(|qv| qv <= 7) {
            let qv = q.q_u64().unwrap();
            match oracle::fixed_point_audit(w, q, limit) {
                Ok(audit) => {
                    let field = Field::new(q.p(), q.alpha(), limit).expect("small field");
                    let ok = audit.iter().all(|(lambda, fixed)| {
                        let n_lambda = w
                            .weights()
                            .iter()
                            .filter(|wi| field.pow_u64(*lambda, **wi) == 1)
                            .count() as u32;
                        *fixed == qv.pow(n_lambda) - 1
                    });
                    tally.record(2, ok, || format!("w={w} q={q}: audit mismatch"));
                }
                Err(Error::FieldTooLarge { .. }) => {}
                Err(e) => tally.record(2, false, || format!("w={w} q={q}: {e}")),
            }
        }

        let zeta_ok = (|| -> Result<bool, Error> {
            let total = ZetaFactorization::build(w, q, Stratum::Total)?;
            let smooth = ZetaFactorization::build(w, q, Stratum::Smooth)?;
            let singular = ZetaFactorization::build(w, q, Stratum::Singular)?;
            if !zeta::decomposition_check(w, q)? {
                return Ok(false);
            }
            for r in 1..=rmax {
                let direct = counting::count_strata(w, &q.extend(r))?;
                if total.recover_count(r) != BigInt::from(direct.total)
                    || smooth.recover_count(r) != BigInt::from(direct.smooth)
                    || singular.recover_count(r) != BigInt::from(direct.singular)
                {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        tally.record(3, zeta_ok.unwrap_or(false), || {
            format!("w={w} q={q}: zeta recovery or decomposition failed")
        });

        let norm = counting::normalization_relation(w, q).expect("n is small");
        tally.record(
            4,
            norm.relation_holds
                && norm.count_w_norm <= norm.count_w
                && ((norm.count_w_norm == norm.count_w) == (norm.d_prime == 1)),
            || format!("w={w} q={q}: normalization relation failed"),
        );

        for gamma in [2u64, 3] {
            if wps::arith::gcd(w.weights()[0], gamma) != 1 {
                continue;
            }
            let rep = counting::scaling_difference(w, gamma, q).expect("validated");
            let mut ok = rep.difference == rep.formula_sum;
            if wps::arith::gcd_u64_big(gamma, &q.q_minus_one()) == 1 {
                ok &= rep.difference.is_zero();
            }
            tally.record(5, ok, || format!("w={w} q={q} gamma={gamma}: scaling failed"));
        }

        match counting::count_special_case(w, q) {
            Ok(count) => tally.record(6, count == strata.total, || {
                format!("w={w} q={q}: special-case count {count} != {}", strata.total)
            }),
            Err(Error::HypothesisViolated { .. }) => {}
            Err(e) => tally.record(6, false, || format!("w={w} q={q}: {e}")),
        }
    }
    tally
}

pub fn verify(
    nmax: usize,
    wmax: u64,
    qs: &str,
    rmax: u32,
    limit: u64,
    sink: &Sink,
) -> Result<(), Failure> {
    if !(1..=6).contains(&nmax) {
        return Err(Failure::Input("--nmax must be in 1..=6".into()));
    }
    if !(1..=12).contains(&wmax) {
        return Err(Failure::Input("--wmax must be in 1..=12".into()));
    }
    if !(1..=16).contains(&rmax) {
        return Err(Failure::Input("--rmax must be in 1..=16".into()));
    }
    let qs: Vec<PrimePower> = qs
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| Failure::Input(format!("bad q value {:?}", part.trim())))
                .and_then(|v| PrimePower::from_q(v).map_err(Failure::from))
        })
        .collect::<Result<_, _>>()?;

    let mut sweep = Vec::new();
    for n_plus_1 in 2..=nmax + 1 {
        sweep.extend(weight_sweep(n_plus_1, wmax));
    }

    let tally = sweep
        .par_iter()
        .map(|w| verify_one(w, &qs, rmax, limit))
        .reduce(Tally::default, Tally::merge);

    let mut table = Table::new(&["check", "pass", "fail"]);
    for (i, name) in CHECKS.iter().enumerate() {
        table.row(vec![
            name.to_string(),
            tally.pass[i].to_string(),
            tally.fail[i].to_string(),
        ]);
    }
    let total_fail: u64 = tally.fail.iter().sum();
    let ok = total_fail == 0;
    let mut text = format!(
        "verification sweep: n <= {nmax}, weights <= {wmax}, q in {}, r <= {rmax}\n\
         {} weight vectors\n{}",
        qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","),
        sweep.len(),
        table.render()
    );
    for note in &tally.notes {
        text.push_str(note);
        text.push('\n');
    }
    text.push_str(&format!("result: {}\n", if ok { "PASS" } else { "FAIL" }));

    let checks_json: Vec<Value> = CHECKS
        .iter()
        .enumerate()
        .map(|(i, name)| {
            object(vec![
                ("name", Value::String(name.to_string())),
                ("pass", int_json(tally.pass[i])),
                ("fail", int_json(tally.fail[i])),
            ])
        })
        .collect();

    sink.emit(&Report {
        table: text,
        json: object(vec![
            ("command", Value::String("verify".into())),
            (
                "config",
                object(vec![
                    ("nmax", int_json(nmax)),
                    ("wmax", int_json(wmax)),
                    ("rmax", int_json(rmax)),
                    ("limit", int_json(limit)),
                    ("qs", ints_json(qs.iter().map(|q| q.q().clone()))),
                ]),
            ),
            ("checks", Value::Array(checks_json)),
            ("ok", Value::Bool(ok)),
        ]),
        csv: Some(table.render_csv()),
    })?;

    if !ok {
        return Err(Failure::Mismatch(format!("{total_fail} checks failed")));
    }
    Ok(())
}
