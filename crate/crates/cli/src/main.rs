mod cache;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metagenus::arith::{is_squarefree, radical};
use metagenus::bounds::{classify, FamilyVariant, RecordStore};
use metagenus::fuchsian::{abelianization, admits_cyclic_quotient, Signature};
use metagenus::genvec::ENGINE_VERSION;
use metagenus::groups::{Group, MetacyclicParams};
use serde_json::json;

use cache::Cache;
use suites::{frac, vector_text, Outcome, Suite, SuiteArgs};

#[derive(Parser)]
#[command(
    name = "metagenus",
    version,
    about = "Exact checks of order bounds for metacyclic actions on Riemann surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON-lines cache of minimal-genus records.
    #[arg(long, env = "METAGENUS_CACHE", global = true)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 0)]
    t: u64,
}

impl ParamArgs {
    fn params(&self) -> MetacyclicParams {
        MetacyclicParams::new(self.m, self.n, self.k, self.t)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Measure, order multiplier, abelianization and cyclic quotients of a signature.
    Signature {
        /// Orbit genus.
        #[arg(long, default_value_t = 0)]
        h: u64,
        /// Comma-separated periods.
        #[arg(long, value_delimiter = ',')]
        periods: Vec<u64>,
        /// Cyclic quotient orders to test (comma-separated or repeated).
        #[arg(long, value_delimiter = ',')]
        quotient: Vec<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Invariants of the metacyclic group <a, b | a^m, b^n = a^t, b a b^-1 = a^k>.
    Group {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Least genus of an action, with a witness.
    MinGenus {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 50)]
        genus_cap: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 240)]
        order_max: u64,
        /// Defaults to order_max / 4 + 2.
        #[arg(long)]
        genus_cap: Option<u64>,
        #[arg(long)]
        variant: Option<FamilyVariant>,
        #[arg(long)]
        prime: Option<u64>,
        /// Genus for the explicit-family suites.
        #[arg(long)]
        genus: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

/// Non-success outcomes; usage errors exit with 2, failed checks with 1.
pub enum Failure {
    Usage(String),
    Violation(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Signature { common, .. }
        | Command::Group { common, .. }
        | Command::MinGenus { common, .. }
        | Command::Verify { common, .. } => common,
    }
}

fn dispatch(cmd: Command) -> Result<bool, Failure> {
    let c = common(&cmd);
    let format = c.format;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = c.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;
    let cache =
        match &c.cache {
            Some(path) => Some(Cache::open(path).map_err(|e| {
                Failure::Usage(format!("cannot read cache {}: {e}", path.display()))
            })?),
            None => None,
        };
    if let Some(cache) = &cache {
        if cache.rejected > 0 {
            eprintln!(
                "note: {} cache entries failed validation and will be recomputed",
                cache.rejected
            );
        }
    }
    let store = cache.as_ref().map(|c| c as &dyn RecordStore);

    let outcome = pool.install(|| match cmd {
        Command::Signature {
            h,
            periods,
            quotient,
            ..
        } => cmd_signature(h, periods, &quotient),
        Command::Group { params, .. } => cmd_group(params.params()),
        Command::MinGenus {
            params, genus_cap, ..
        } => cmd_min_genus(params.params(), genus_cap, store),
        Command::Verify {
            suite,
            order_max,
            genus_cap,
            variant,
            prime,
            genus,
            ..
        } => {
            if order_max < 2 {
                return Err(Failure::Usage("--order-max must be at least 2".into()));
            }
            let args = SuiteArgs {
                order_max,
                genus_cap,
                variant,
                prime,
                genus,
            };
            suites::run(suite, &args, store)
        }
    })?;
    emit(&outcome, format);
    Ok(outcome.verified)
}

fn emit(o: &Outcome, format: Format) {
    let body = match format {
        Format::Text => o.text.clone(),
        Format::Json => serde_json::to_string_pretty(&o.json).expect("serializable") + "\n",
        Format::Csv => o.csv.clone(),
    };
    let mut out = std::io::stdout().lock();
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = out.write_all(body.as_bytes()).and_then(|()| out.flush());
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_signature(h: u64, periods: Vec<u64>, quotients: &[u64]) -> Result<Outcome, Failure> {
    let sig = Signature::new(h, periods).map_err(|e| Failure::Usage(e.to_string()))?;
    let mu = sig.measure();
    let (mn, md) = frac(&mu);
    let ab = abelianization(&sig);
    let mult = sig.order_multiplier();
    let qs: Vec<(u64, bool)> = quotients
        .iter()
        .map(|&d| (d, admits_cyclic_quotient(&sig, d)))
        .collect();

    let mut text = format!("signature: {sig}\nmeasure: {mu}\n");
    match &mult {
        Ok(m) => text += &format!("order multiplier: {m}\n"),
        Err(e) => text += &format!("order multiplier: undefined ({e})\n"),
    }
    text += &format!("abelianization: {ab}\n");
    for (d, ok) in &qs {
        text += &format!("C{d} quotient: {}\n", yes(*ok));
    }

    let multiplier = mult.as_ref().ok().map(|m| {
        let (n, d) = frac(m);
        json!({"numerator": n, "denominator": d})
    });
    let json = json!({
        "signature": sig,
        "measure_num": mn,
        "measure_den": md,
        "hyperbolic": sig.is_hyperbolic(),
        "order_multiplier": multiplier,
        "error": mult.as_ref().err().map(|e| e.to_string()),
        "abelianization": ab,
        "quotients": qs.iter().map(|(d, ok)| json!({"d": d, "admits": ok})).collect::<Vec<_>>(),
    });
    let mut csv = String::from("key,value\n");
    csv += &format!("signature,\"{sig}\"\nmeasure_num,{mn}\nmeasure_den,{md}\n");
    if let Ok(m) = &mult {
        let (n, d) = frac(m);
        csv += &format!("multiplier_num,{n}\nmultiplier_den,{d}\n");
    }
    csv += &format!("abelianization,{ab}\n");
    for (d, ok) in &qs {
        csv += &format!("quotient_{d},{ok}\n");
    }
    Ok(Outcome {
        verified: true,
        json,
        text,
        csv,
    })
}

fn cmd_group(p: MetacyclicParams) -> Result<Outcome, Failure> {
    let g = Group::new(p).map_err(|e| Failure::Usage(e.to_string()))?;
    let order = g.order();
    let ab = g.abelianization();
    let derived = g.derived_subgroup().len();
    let tags: Vec<&str> = classify(&g).iter().map(|t| t.as_str()).collect();
    let flags = [
        ("z_group", g.is_z_group()),
        ("cyclic_sylow2", g.has_cyclic_sylow2()),
        ("squarefree_order", is_squarefree(order)),
        ("split", p.is_split()),
    ];
    let mut fields: Vec<(&str, String)> = vec![
        ("params", p.to_string()),
        ("order", order.to_string()),
        ("exponent", g.exponent().to_string()),
        ("radical", radical(order).to_string()),
        ("abelianization", ab.to_string()),
        ("derived_order", derived.to_string()),
    ];
    let text: String = fields
        .iter()
        .map(|(k, v)| format!("{k}: {v}\n"))
        .chain(flags.iter().map(|(k, b)| format!("{k}: {}\n", yes(*b))))
        .chain(std::iter::once(format!("class_tags: {}\n", tags.join(";"))))
        .collect();
    fields.extend(flags.iter().map(|(k, b)| (*k, b.to_string())));
    fields.push(("class_tags", tags.join(";")));
    let csv = std::iter::once("key,value\n".to_string())
        .chain(fields.iter().map(|(k, v)| format!("{k},\"{v}\"\n")))
        .collect();
    let json = json!({
        "params": p,
        "order": order,
        "exponent": g.exponent(),
        "radical": radical(order),
        "abelianization": ab,
        "derived_order": derived,
        "z_group": g.is_z_group(),
        "cyclic_sylow2": g.has_cyclic_sylow2(),
        "squarefree_order": is_squarefree(order),
        "split": p.is_split(),
        "class_tags": tags,
    });
    Ok(Outcome {
        verified: true,
        json,
        text,
        csv,
    })
}

fn cmd_min_genus(
    p: MetacyclicParams,
    genus_cap: u64,
    store: Option<&dyn RecordStore>,
) -> Result<Outcome, Failure> {
    if genus_cap < 2 {
        return Err(Failure::Usage("--genus-cap must be at least 2".into()));
    }
    let g = Group::new(p).map_err(|e| Failure::Usage(e.to_string()))?;
    let cached = store
        .and_then(|s| s.lookup(p))
        .filter(|r| r.revalidate_against(&g));
    let rec = match cached {
        Some(mut r) => {
            r.search_cap = genus_cap;
            (r.min_genus <= genus_cap).then_some(r)
        }
        None => {
            let r = metagenus::genvec::min_genus(&g, genus_cap);
            if let (Some(s), Some(r)) = (store, &r) {
                s.store(r);
            }
            r
        }
    };
    let rec = rec.ok_or_else(|| {
        Failure::Violation(format!(
            "NotFoundWithinCap: {p} has no action on genus 2..={genus_cap}"
        ))
    })?;
    let text = format!(
        "params: {p}\norder: {}\nmin genus: {}\nsignature: {}\nwitness: {}\n",
        g.order(),
        rec.min_genus,
        rec.witness_signature,
        vector_text(&rec.witness_vector)
    );
    let csv = format!(
        "m,n,k,t,order,min_genus,signature\n{},{},{},{},{},{},\"{}\"\n",
        p.m,
        p.n,
        p.k,
        p.t,
        g.order(),
        rec.min_genus,
        rec.witness_signature
    );
    let mut json = serde_json::to_value(&rec).expect("serializable");
    json["engine_version"] = json!(ENGINE_VERSION);
    Ok(Outcome {
        verified: true,
        json,
        text,
        csv,
    })
}
