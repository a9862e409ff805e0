use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use biquad_harness::{classify_tuple, CacheRecord, enumerate_tuples, verify_campaign, DiskCache, Family, HarnessError, SweepConfig};
use biquad_iwasawa::classify::{
    classify_first_main, classify_trivial_iwasawa, rank3_families, rank_bounds_form_d, rank_k1, Classification,
    FamilyInput,
};
use biquad_iwasawa::error::ClassifyError;
use biquad_iwasawa::local::ambiguous_rank;
use biquad_iwasawa::multiquad::{first_layer, mq_square_test_numeric, MultiQuadField};
use biquad_iwasawa::quad::{class_number_with_structure, QuadField};
use biquad_iwasawa::units::{kuroda_h2, wada_unit_system, Memo, QuadSource};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "biquad", about = "2-class groups and Iwasawa modules of real biquadratic fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// directory of the persistent class number and unit cache
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1 << 34)]
    disc_bound: i64,
    #[arg(long, global = true, default_value_t = 1)]
    parallelism: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// every classifier that applies to Q(sqrt a, sqrt b)
    Classify {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
    },
    /// 2-rank of A(K) for K = F(sqrt d), F = Q(sqrt m), by ambiguous classes
    Rank {
        /// m,d
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
    },
    Classnumber {
        #[arg(long)]
        m: i64,
    },
    Unit {
        #[arg(long)]
        m: i64,
    },
    /// unit index of a multiquadratic field
    Qindex {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
        /// also rebuild each unit from its square numerically at this precision
        #[arg(long)]
        precision_bits: Option<u32>,
    },
    /// 2-class number by Kuroda's formula, optionally at layer 1 too
    Kuroda {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
        #[arg(long)]
        layer1: bool,
    },
    /// classify every tuple of a family, without oracles
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        tuple_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// classify and check every tuple of a family against the oracles
    Verify {
        #[arg(long)]
        family: String,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        tuple_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// leave timings out so that reports are byte-identical
        #[arg(long)]
        no_timings: bool,
    },
}

enum Failure {
    Config(String),
    Resource(String),
    Other(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(s) => Failure::Config(s),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::from(ClassifyError::from(e))
            }
        }
    )*};
}
from_core!(
    biquad_iwasawa::error::QuadError,
    biquad_iwasawa::error::MqError,
    biquad_iwasawa::error::LocalError
);

fn pair(gens: &[i64]) -> Result<[i64; 2], Failure> {
    match *gens {
        [a, b] => Ok([a, b]),
        _ => Err(Failure::Config(format!("expected two generators, got {gens:?}"))),
    }
}

fn outcome(c: Result<Classification, ClassifyError>) -> Value {
    match c {
        Ok(c) => json!(c),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn classify(gens: [i64; 2], src: &dyn QuadSource) -> Result<Value, Failure> {
    let k = FamilyInput::Field { gens };
    k.validate()?;
    let readings = FamilyInput::recognize(gens);
    let mut per = Vec::new();
    for rd in &readings {
        let mut v = json!({ "reading": rd });
        if matches!(rd, FamilyInput::Q1Q2(_)) {
            v["rank_bounds_form_d"] = outcome(rank_bounds_form_d(rd));
            v["rank_k1"] = outcome(rank_k1(rd));
            v["rank3_families"] = outcome(rank3_families(rd));
        }
        per.push(v);
    }
    Ok(json!({
        "gens": gens,
        "readings": per,
        "first_main": outcome(classify_first_main(&k, src)),
        "trivial_iwasawa": outcome(classify_trivial_iwasawa(&k, src)),
    }))
}

fn write_lines(out: Option<&PathBuf>, lines: &[String]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Other(e.to_string());
    let mut w: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    for l in lines {
        writeln!(w, "{l}").map_err(io)?;
    }
    w.flush().map_err(io)
}

fn config(family: &str, bound: u64, cap: Option<usize>, out: Option<PathBuf>, cli: &Cli) -> SweepConfig {
    SweepConfig {
        tuple_cap: cap.unwrap_or(usize::MAX),
        disc_bound: cli.disc_bound,
        parallelism: cli.parallelism,
        out_path: out,
        ..SweepConfig::new(family, bound)
    }
}

fn run(cli: &Cli, src: &dyn QuadSource) -> Result<u8, Failure> {
    let v = match &cli.cmd {
        Cmd::Classify { gens } => classify(pair(gens)?, src)?,
        Cmd::Rank { gens } => {
            let [m, d] = pair(gens)?;
            json!(ambiguous_rank(&QuadField::new(m)?, d, src)?)
        }
        Cmd::Classnumber { m } => json!(class_number_with_structure(*m, cli.disc_bound)?),
        Cmd::Unit { m } => {
            let u = src.unit(*m)?;
            let line = CacheRecord { m: *m, class: None, unit: (*u).clone() }.to_line();
            let mut v: Value = serde_json::from_str(&line).map_err(|e| Failure::Other(e.to_string()))?;
            v.as_object_mut().map(|o| o.remove("v"));
            v
        }
        Cmd::Qindex { gens, precision_bits } => {
            let f = MultiQuadField::new(gens)?;
            let us = wada_unit_system(&f, src)?;
            let mut v = json!({
                "gens": gens,
                "q_index": us.q_index,
                "roots": us.root_labels(),
                "exponent_determinant": us.exponent_determinant().to_string(),
            });
            if let Some(bits) = precision_bits {
                // the numeric route must recover each unit up to sign from its square
                let mut ok = true;
                for u in &us.units {
                    let sq = &u.value * &u.value;
                    let back = mq_square_test_numeric(&sq, *bits)?;
                    ok &= back.is_some_and(|r| r == u.value || r == -&u.value);
                }
                v["numeric_cross_check"] = json!(ok);
            }
            v
        }
        Cmd::Kuroda { gens, layer1 } => {
            let f = MultiQuadField::new(gens)?;
            let mut v = json!({ "layer0": kuroda_h2(&f, src)? });
            if *layer1 {
                v["layer1"] = json!(kuroda_h2(&first_layer(&f)?, src)?);
            }
            v
        }
        Cmd::Sweep { family, bound, tuple_cap, out } => {
            let cfg = config(family, *bound, *tuple_cap, None, cli);
            let fam = Family::parse(family)?;
            let mut lines = Vec::new();
            for k in enumerate_tuples(&cfg)? {
                let line = match classify_tuple(&fam, &k, src) {
                    Ok(Some(c)) => json!({ "family": fam.name(), "tuple": k, "predicted": c }),
                    Ok(None) => continue,
                    Err(e) => json!({ "family": fam.name(), "tuple": k, "error": e.to_string() }),
                };
                lines.push(line.to_string());
            }
            write_lines(out.as_ref(), &lines)?;
            return Ok(0);
        }
        Cmd::Verify { family, bound, tuple_cap, out, no_timings } => {
            let cfg = config(family, *bound, *tuple_cap, out.clone(), cli);
            let s = verify_campaign(&cfg, src, !no_timings)?;
            eprintln!(
                "{}: {} records, {} agree, {} disagree, {} resource",
                s.family, s.records, s.agree, s.disagree, s.resource
            );
            return Ok(s.exit_code as u8);
        }
    };
    println!("{v}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let src: Box<dyn QuadSource> = match &cli.cache_dir {
        Some(dir) => match DiskCache::open(dir, cli.disc_bound) {
            Ok(c) => Box::new(c),
            Err(e) => {
                eprintln!("cannot open cache: {e}");
                return ExitCode::from(2);
            }
        },
        None => Box::new(Memo::new(cli.disc_bound)),
    };
    match run(&cli, src.as_ref()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(e)) => {
            eprintln!("resource bound: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
