//! Verification suites and their renderings.

use std::fmt::Write as _;

use metagenus::bounds::{
    construct_family, verify_bound_scan_with, verify_c2p_quotient_bound,
    verify_c4_quotient_signatures, verify_c8_quotient_bound, verify_derived_chains,
    verify_explicit_family, verify_no_large_action_on_prime_successor, BoundsError, ClassTag,
    DerivedChain, ExceptionDescriptor, ExplicitFamily, FamilyCheck, FamilyInstance, FamilyVariant,
    GenusActionReport, OrderFilter, RecordStore, ScanConfig, ScanReport, SignatureListing,
};
use metagenus::ExactRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Suite {
    /// Signatures above multiplier 8 with a C8 quotient (none).
    Thm33,
    /// Signatures above multiplier 10 with a C4 quotient.
    Lemma34,
    /// Signatures above 4p/(p-3) with a C2p quotient (none); uses --prime.
    Thm45,
    /// Derived-subgroup signature chains.
    Chain2310,
    /// Metacyclic groups: order <= 12(g-1) up to --order-max.
    Thm48,
    /// Z-groups: order <= 10(g-1).
    Thm55,
    /// Square-free orders: order <= 10(g-1).
    Cor56,
    /// Cyclic Sylow-2, 4 | order: order <= 12(g-1).
    Cor35,
    /// Odd orders: order <= 9(g-1).
    Prop42,
    /// No metacyclic action of order in (8(p+1), 12p] on genus p+1; uses --prime.
    Thm49,
    /// Extremal family instance; needs --variant and --prime.
    Families,
    /// Minimal genus of the 6g family; uses --genus.
    Thm43,
    /// Minimal genus of the 8g family; uses --genus.
    Thm44,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm33 => "thm33",
            Suite::Lemma34 => "lemma34",
            Suite::Thm45 => "thm45",
            Suite::Chain2310 => "chain2310",
            Suite::Thm48 => "thm48",
            Suite::Thm55 => "thm55",
            Suite::Cor56 => "cor56",
            Suite::Cor35 => "cor35",
            Suite::Prop42 => "prop42",
            Suite::Thm49 => "thm49",
            Suite::Families => "families",
            Suite::Thm43 => "thm43",
            Suite::Thm44 => "thm44",
        }
    }
}

pub struct SuiteArgs {
    pub order_max: u64,
    pub genus_cap: Option<u64>,
    pub variant: Option<FamilyVariant>,
    pub prime: Option<u64>,
    pub genus: Option<u64>,
}

/// Everything a subcommand prints, in all three formats.
pub struct Outcome {
    pub verified: bool,
    pub json: Value,
    pub text: String,
    pub csv: String,
}

pub fn frac(r: &ExactRational) -> (i128, i128) {
    r.to_i128_parts().expect("small rationals")
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn status(ok: bool) -> &'static str {
    if ok {
        "VERIFIED"
    } else {
        "VIOLATED"
    }
}

fn envelope(suite: Suite, config: Value, verified: bool, report: Value) -> Value {
    json!({
        "suite": suite.name(),
        "engine_version": metagenus::genvec::ENGINE_VERSION,
        "verified": verified,
        "config": config,
        "report": report,
    })
}

pub fn run(
    suite: Suite,
    args: &SuiteArgs,
    store: Option<&dyn RecordStore>,
) -> Result<Outcome, Failure> {
    match suite {
        Suite::Thm33 => Ok(listing(suite, verify_c8_quotient_bound()?)),
        Suite::Lemma34 => Ok(listing(suite, verify_c4_quotient_signatures()?)),
        Suite::Thm45 => Ok(listing(
            suite,
            verify_c2p_quotient_bound(args.prime.unwrap_or(5))?,
        )),
        Suite::Chain2310 => Ok(chains(suite, verify_derived_chains()?)),
        Suite::Thm48 | Suite::Thm55 | Suite::Cor56 | Suite::Cor35 | Suite::Prop42 => {
            let config = scan_config(suite, args);
            let report = verify_bound_scan_with(&config, store)?;
            Ok(scan(suite, &report))
        }
        Suite::Thm49 => {
            let p = args.prime.unwrap_or(17);
            Ok(genus_actions(
                suite,
                &verify_no_large_action_on_prime_successor(p)?,
            ))
        }
        Suite::Families => {
            let variant = args
                .variant
                .ok_or_else(|| Failure::Usage("suite families needs --variant".into()))?;
            let p = args
                .prime
                .ok_or_else(|| Failure::Usage("suite families needs --prime".into()))?;
            Ok(family(suite, &construct_family(variant, p)?))
        }
        Suite::Thm43 => Ok(explicit(
            suite,
            &verify_explicit_family(ExplicitFamily::SixG, args.genus.unwrap_or(5))?,
        )),
        Suite::Thm44 => Ok(explicit(
            suite,
            &verify_explicit_family(ExplicitFamily::EightG, args.genus.unwrap_or(2))?,
        )),
    }
}

fn scan_config(suite: Suite, args: &SuiteArgs) -> ScanConfig {
    let (tag, coefficient, filter, exceptions) = match suite {
        Suite::Thm48 => (
            ClassTag::Metacyclic,
            12,
            OrderFilter::All,
            vec![ExceptionDescriptor::order16_genus2()],
        ),
        Suite::Thm55 => (
            ClassTag::ZGroup,
            10,
            OrderFilter::All,
            vec![
                ExceptionDescriptor::c3_c4_genus2(),
                ExceptionDescriptor::c7_c3_genus3(),
            ],
        ),
        Suite::Cor56 => (
            ClassTag::Squarefree,
            10,
            OrderFilter::All,
            vec![ExceptionDescriptor::c7_c3_genus3()],
        ),
        Suite::Cor35 => (
            ClassTag::CyclicSylow2Metacyclic,
            12,
            OrderFilter::DivisibleBy4,
            vec![],
        ),
        Suite::Prop42 => (
            ClassTag::Metacyclic,
            9,
            OrderFilter::Odd,
            vec![ExceptionDescriptor::c7_c3_genus3()],
        ),
        _ => unreachable!("not a scan suite"),
    };
    let mut config = ScanConfig::new(tag, coefficient, args.order_max)
        .with_order_filter(filter)
        .with_exceptions(exceptions);
    if let Some(cap) = args.genus_cap {
        config = config.with_genus_cap(cap);
    }
    config
}

fn scan(suite: Suite, r: &ScanReport) -> Outcome {
    let (cn, cd) = frac(&r.coefficient);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}: class {}, orders {}..={}, filter {}, coefficient {}, genus cap {}",
        suite.name(),
        r.class_tag,
        r.order_min,
        r.order_max,
        serde_json::to_value(r.order_filter)
            .expect("serializable")
            .as_str()
            .unwrap_or("?"),
        r.coefficient,
        r.genus_cap
    );
    let found = r.rows.iter().filter(|row| row.min_genus.is_some()).count();
    let _ = writeln!(
        text,
        "groups scanned: {}, with an action within the search cap: {}",
        r.rows.len(),
        found
    );
    for e in &r.matched_exceptions {
        let ps: Vec<String> = e.params.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(
            text,
            "exception {}: order {}, genus {}, params {}",
            e.label,
            e.order,
            e.min_genus,
            ps.join(" ")
        );
    }
    for v in &r.violations {
        let _ = writeln!(
            text,
            "violation: {} order {} genus {} ratio {}",
            v.params(),
            v.order,
            v.min_genus.unwrap_or(0),
            v.ratio().map(|x| x.to_string()).unwrap_or_default()
        );
    }
    let _ = writeln!(text, "violations: {}", r.violations.len());
    let _ = writeln!(text, "{}", status(r.verified()));

    let mut csv_out = Vec::new();
    r.write_csv(&mut csv_out).expect("in-memory write");
    let config = json!({
        "class_tag": r.class_tag,
        "coefficient_num": cn,
        "coefficient_den": cd,
        "order_min": r.order_min,
        "order_max": r.order_max,
        "genus_cap": r.genus_cap,
        "order_filter": r.order_filter,
    });
    Outcome {
        verified: r.verified(),
        json: envelope(suite, config, r.verified(), to_value(r)),
        text,
        csv: String::from_utf8(csv_out).expect("utf8"),
    }
}

fn listing(suite: Suite, l: SignatureListing) -> Outcome {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}: signatures with multiplier > {} admitting a C{} quotient: {}",
        suite.name(),
        l.threshold,
        l.quotient,
        l.entries.len()
    );
    let mut rows = Vec::new();
    for (kind, list) in [("entry", &l.entries), ("boundary", &l.boundary)] {
        for e in list {
            let (n, d) = frac(&e.multiplier);
            if kind == "entry" {
                let _ = writeln!(text, "  {} multiplier {}", e.signature, e.multiplier);
            } else {
                let _ = writeln!(
                    text,
                    "  boundary {} multiplier {}",
                    e.signature, e.multiplier
                );
            }
            rows.push(vec![
                kind.to_string(),
                e.signature.to_string(),
                n.to_string(),
                d.to_string(),
            ]);
        }
    }
    let _ = writeln!(text, "{}", status(l.holds));
    let (tn, td) = frac(&l.threshold);
    Outcome {
        verified: l.holds,
        json: envelope(
            suite,
            json!({"threshold_num": tn, "threshold_den": td, "quotient": l.quotient}),
            l.holds,
            to_value(&l),
        ),
        text,
        csv: csv_table(
            &["kind", "signature", "multiplier_num", "multiplier_den"],
            rows,
        ),
    }
}

fn chains(suite: Suite, cs: Vec<DerivedChain>) -> Outcome {
    let ok = cs.iter().all(|c| c.holds);
    let mut text = String::new();
    let mut rows = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        let sigs: Vec<String> = c.steps.iter().map(|s| s.signature.to_string()).collect();
        let _ = writeln!(text, "{}: {}", suite.name(), sigs.join(" -> "));
        for (depth, s) in c.steps.iter().enumerate() {
            let (n, d) = frac(&s.measure);
            let _ = writeln!(
                text,
                "  {} measure {} abelianization {}",
                s.signature, s.measure, s.abelianization
            );
            rows.push(vec![
                i.to_string(),
                depth.to_string(),
                s.signature.to_string(),
                n.to_string(),
                d.to_string(),
                s.abelianization.to_string(),
            ]);
        }
    }
    let _ = writeln!(text, "{}", status(ok));
    Outcome {
        verified: ok,
        json: envelope(suite, json!({}), ok, to_value(&cs)),
        text,
        csv: csv_table(
            &[
                "chain",
                "depth",
                "signature",
                "measure_num",
                "measure_den",
                "abelianization",
            ],
            rows,
        ),
    }
}

fn genus_actions(suite: Suite, r: &GenusActionReport) -> Outcome {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}: genus {}, orders {}..={}, groups scanned {}, actions found {}",
        suite.name(),
        r.genus,
        r.order_lo + 1,
        r.order_hi,
        r.groups_scanned,
        r.actions.len()
    );
    let mut rows = Vec::new();
    for a in &r.actions {
        let _ = writeln!(text, "  action: {} on {}", a.params, a.signature);
        rows.push(vec![
            a.params.m.to_string(),
            a.params.n.to_string(),
            a.params.k.to_string(),
            a.params.t.to_string(),
            a.params.order().to_string(),
            a.signature.to_string(),
        ]);
    }
    let _ = writeln!(text, "{}", status(r.holds));
    Outcome {
        verified: r.holds,
        json: envelope(
            suite,
            json!({"genus": r.genus, "order_lo": r.order_lo, "order_hi": r.order_hi}),
            r.holds,
            to_value(r),
        ),
        text,
        csv: csv_table(&["m", "n", "k", "t", "order", "signature"], rows),
    }
}

fn family(suite: Suite, f: &FamilyInstance) -> Outcome {
    let ok = f.attains_coefficient();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}: variant {}, p = {}: {} of order {} acts on genus {} via {}",
        suite.name(),
        f.variant,
        f.p,
        f.params,
        f.order,
        f.genus,
        f.signature
    );
    let _ = writeln!(text, "  witness: {}", vector_text(&f.vector));
    let _ = writeln!(
        text,
        "  order = {} (genus - 1): {}",
        f.coefficient,
        if ok { "yes" } else { "no" }
    );
    let _ = writeln!(text, "{}", status(ok));
    Outcome {
        verified: ok,
        json: envelope(
            suite,
            json!({"variant": f.variant, "prime": f.p}),
            ok,
            to_value(f),
        ),
        text,
        csv: csv_table(
            &[
                "variant",
                "p",
                "m",
                "n",
                "k",
                "t",
                "order",
                "genus",
                "signature",
                "coefficient",
            ],
            vec![vec![
                f.variant.to_string(),
                f.p.to_string(),
                f.params.m.to_string(),
                f.params.n.to_string(),
                f.params.k.to_string(),
                f.params.t.to_string(),
                f.order.to_string(),
                f.genus.to_string(),
                f.signature.to_string(),
                f.coefficient.to_string(),
            ]],
        ),
    }
}

fn explicit(suite: Suite, c: &FamilyCheck) -> Outcome {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}: {} of order {}: minimal genus {} (expected {})",
        suite.name(),
        c.params,
        c.order,
        c.min_genus
            .map(|g| g.to_string())
            .unwrap_or_else(|| "none".into()),
        c.genus
    );
    if let Some(s) = &c.witness_signature {
        let _ = writeln!(text, "  witness signature {s}");
    }
    let _ = writeln!(text, "{}", status(c.holds));
    Outcome {
        verified: c.holds,
        json: envelope(suite, json!({"genus": c.genus}), c.holds, to_value(c)),
        text,
        csv: csv_table(
            &["m", "n", "k", "t", "order", "genus", "min_genus", "holds"],
            vec![vec![
                c.params.m.to_string(),
                c.params.n.to_string(),
                c.params.k.to_string(),
                c.params.t.to_string(),
                c.order.to_string(),
                c.genus.to_string(),
                c.min_genus.map(|g| g.to_string()).unwrap_or_default(),
                c.holds.to_string(),
            ]],
        ),
    }
}

pub fn vector_text(v: &metagenus::genvec::GeneratingVector) -> String {
    let fmt = |es: &[metagenus::groups::Element]| {
        es.iter()
            .map(|e| format!("a^{} b^{}", e.i, e.j))
            .collect::<Vec<_>>()
            .join(", ")
    };
    if v.hyperbolic_pairs.is_empty() {
        format!("[{}]", fmt(&v.elliptic))
    } else {
        format!(
            "hyperbolic [{}] elliptic [{}]",
            fmt(&v.hyperbolic_pairs),
            fmt(&v.elliptic)
        )
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::NoWitness { .. } => Failure::Violation(e.to_string()),
            BoundsError::Signature(_) => Failure::Violation(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}
