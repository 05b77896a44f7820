use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::time::Duration;

use psl_core::harness::{
    append_record, default_threads, exhaustive_psl_with_cap, format_sweep_table, hybrid_legendre, hybrid_mseq,
    run_experiment, sweep, verify_known_table,
};
use psl_core::rotation::scan_rotations_parallel;
use psl_core::search::rng_from_seed;
use psl_core::{
    decode_hex, encode_hex, legendre, mseq, psl, random_sequence, scan_rotations, Acceptance, BinarySequence,
    ExperimentConfig, ExperimentRecord, FitnessSpec, HybridConfig, LfsrSpec, SeedProvenance, StopCriteria,
};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::Output;

pub type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn fail<T>(message: impl Into<String>) -> CliResult<T> {
    Err(message.into().into())
}

pub fn run<W: Write>(command: &Command, out: &mut Output<W>) -> CliResult<()> {
    out.header(command_name(command))?;
    match command {
        Command::Psl(input) => cmd_psl(input, out),
        Command::Encode(input) => cmd_encode(input, out),
        Command::Decode(input) => cmd_decode(input, out),
        Command::Optimize(args) => cmd_optimize(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::RotateScan(args) => cmd_rotate_scan(args, out),
        Command::Gen(gen) => cmd_gen(gen, out),
        Command::Exhaustive(args) => cmd_exhaustive(args, out),
        Command::VerifyTable(args) => cmd_verify_table(args, out),
        Command::Hybrid(hybrid) => cmd_hybrid(hybrid, out),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Psl(_) => "psl",
        Command::Encode(_) => "encode",
        Command::Decode(_) => "decode",
        Command::Optimize(_) => "optimize",
        Command::Sweep(_) => "sweep",
        Command::RotateScan(_) => "rotate-scan",
        Command::Gen(GenCommand::Mseq(_)) => "gen mseq",
        Command::Gen(GenCommand::Legendre(_)) => "gen legendre",
        Command::Gen(GenCommand::Random(_)) => "gen random",
        Command::Exhaustive(_) => "exhaustive",
        Command::VerifyTable(_) => "verify-table",
        Command::Hybrid(HybridCommand::Mseq { .. }) => "hybrid mseq",
        Command::Hybrid(HybridCommand::Legendre { .. }) => "hybrid legendre",
    }
}

/// Default exponent for a length band.
pub fn default_alpha(n: usize) -> u32 {
    match n {
        0..=500 => 3,
        501..=1500 => 4,
        1501..=3000 => 5,
        _ => 6,
    }
}

fn read_source(file: Option<&Path>) -> CliResult<String> {
    match file {
        Some(path) if path != Path::new("-") => {
            fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
        }
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn strip_hex_prefix(text: &str) -> &str {
    text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text)
}

fn load_sequence(input: &SequenceInput) -> CliResult<BinarySequence> {
    let (hex, n_from_source) = match &input.hex {
        Some(hex) => (hex.trim().to_string(), None),
        None => {
            let text = read_source(input.file.as_deref())?;
            let mut tokens = text.split_whitespace();
            let Some(hex) = tokens.next() else {
                return fail("no sequence given: use --hex, --file or standard input");
            };
            let n = match tokens.next() {
                Some(t) => Some(t.parse::<usize>().map_err(|_| format!("invalid length {t:?} after hex"))?),
                None => None,
            };
            (hex.to_string(), n)
        }
    };
    let hex = strip_hex_prefix(&hex);
    let n = input.n.or(n_from_source).unwrap_or(4 * hex.len());
    Ok(decode_hex(hex, n)?)
}

fn parse_hex_u64(text: &str, what: &str) -> CliResult<u64> {
    u64::from_str_radix(strip_hex_prefix(text.trim()), 16).map_err(|_| format!("invalid {what} {text:?}").into())
}

fn resolve_seed<W: Write>(seed: Option<u64>, out: &mut Output<W>) -> CliResult<u64> {
    let seed = seed.unwrap_or_else(rand::random);
    out.note(&format!("seed {seed}"))?;
    Ok(seed)
}

fn resolve_threads(threads: Option<usize>) -> CliResult<usize> {
    match threads {
        Some(0) => fail("--threads must be at least 1"),
        Some(k) => Ok(k),
        None => Ok(default_threads()),
    }
}

fn stop_criteria(search: &SearchArgs) -> CliResult<StopCriteria> {
    let time_limit = match search.time_limit {
        Some(secs) => Some(Duration::try_from_secs_f64(secs).map_err(|_| format!("invalid --time-limit {secs}"))?),
        None => None,
    };
    Ok(StopCriteria { target_psl: search.target_psl, time_limit })
}

fn acceptance(arg: AcceptanceArg) -> Acceptance {
    match arg {
        AcceptanceArg::Current => Acceptance::Current,
        AcceptanceArg::OverallBest => Acceptance::OverallBest,
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn record_text(record: &ExperimentRecord) -> String {
    let mut text = String::new();
    if let Some(p) = record.unrotated_psl {
        text.push_str(&format!("unrotated_psl {p}\n"));
    }
    if let Some(p) = record.rotation_psl {
        text.push_str(&format!("rotation_psl {p}\n"));
    }
    text.push_str(&format!(
        "best_psl {}\nbest_hex {}\nv_nabla {:.2}\nper_restart_psl {}\nseed_provenance {}\nelapsed_seconds {:.3}\n",
        record.best_psl,
        record.best_hex,
        record.v_nabla,
        join(&record.per_restart_psl),
        record.seed_provenance,
        record.elapsed_seconds,
    ));
    text
}

fn emit_record<W: Write>(record: &ExperimentRecord, results: Option<&Path>, out: &mut Output<W>) -> CliResult<()> {
    if let Some(path) = results {
        append_record(path, record)?;
    }
    out.emit(&serde_json::to_value(record)?, || record_text(record))?;
    Ok(())
}

fn cmd_psl<W: Write>(input: &SequenceInput, out: &mut Output<W>) -> CliResult<()> {
    let b = load_sequence(input)?;
    let p = psl(&b);
    out.emit(&json!({ "n": b.len(), "hex": encode_hex(&b), "psl": p }), || p.to_string())?;
    Ok(())
}

fn cmd_encode<W: Write>(input: &SignInput, out: &mut Output<W>) -> CliResult<()> {
    let text = match &input.signs {
        Some(s) => s.clone(),
        None => read_source(input.file.as_deref())?,
    };
    let b = BinarySequence::parse_signs(&text)?;
    let hex = encode_hex(&b);
    out.emit(&json!({ "n": b.len(), "hex": hex }), || hex.clone())?;
    Ok(())
}

fn cmd_decode<W: Write>(input: &SequenceInput, out: &mut Output<W>) -> CliResult<()> {
    let b = load_sequence(input)?;
    let value = json!({ "n": b.len(), "hex": encode_hex(&b), "sequence": b.as_slice() });
    out.emit(&value, || b.to_signs())?;
    Ok(())
}

fn cmd_optimize<W: Write>(args: &OptimizeArgs, out: &mut Output<W>) -> CliResult<()> {
    let search = &args.search;
    let fitness = FitnessSpec::new(search.alpha.unwrap_or_else(|| default_alpha(args.n)))?;
    let threads = resolve_threads(search.threads)?;
    let stop = stop_criteria(search)?;
    let initial = match &args.init_hex {
        Some(hex) => Some(decode_hex(strip_hex_prefix(hex.trim()), args.n)?),
        None => None,
    };
    let seed = resolve_seed(search.seed, out)?;
    let mut config = ExperimentConfig::new(args.n, fitness, search.restarts, search.threshold, seed)
        .with_threads(threads)
        .with_stop(stop)
        .with_acceptance(acceptance(search.acceptance));
    if let Some(b) = initial {
        config = config.with_initial(b, SeedProvenance::Provided);
    }
    let record = run_experiment(&config)?;
    emit_record(&record, search.results.as_deref(), out)
}

fn cmd_sweep<W: Write>(args: &SweepArgs, out: &mut Output<W>) -> CliResult<()> {
    for &alpha in &args.alphas {
        FitnessSpec::new(alpha)?;
    }
    let threads = resolve_threads(args.threads)?;
    let seed = resolve_seed(args.seed, out)?;
    let records = sweep(args.n, &args.alphas, args.restarts, args.threshold, seed, threads)?;
    if let Some(path) = &args.results {
        for record in &records {
            append_record(path, record)?;
        }
    }
    for record in &records {
        out.data(&serde_json::to_value(record)?)?;
    }
    out.note(format_sweep_table(&records).trim_end())?;
    Ok(())
}

fn cmd_rotate_scan<W: Write>(args: &RotateScanArgs, out: &mut Output<W>) -> CliResult<()> {
    let b = load_sequence(&args.input)?;
    let threads = resolve_threads(args.threads)?;
    let scan = if threads > 1 { scan_rotations_parallel(&b, threads) } else { scan_rotations(&b) };
    if let Some(path) = &args.csv {
        let mut csv = String::with_capacity(scan.psl_per_rotation.len() * 8);
        for (rho, p) in scan.psl_per_rotation.iter().enumerate() {
            csv.push_str(&format!("{rho},{p}\n"));
        }
        fs::write(path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let value = json!({
        "n": b.len(),
        "rho_max": scan.rho_max,
        "min_psl": scan.min_psl,
        "profile": scan.psl_per_rotation,
    });
    out.emit(&value, || {
        format!("rho_max {}\nmin_psl {}\nprofile {}\n", scan.rho_max, scan.min_psl, join(&scan.psl_per_rotation))
    })?;
    Ok(())
}

fn cmd_gen<W: Write>(gen: &GenCommand, out: &mut Output<W>) -> CliResult<()> {
    let (b, extra): (BinarySequence, Value) = match gen {
        GenCommand::Mseq(args) => {
            let spec = lfsr_spec(args)?;
            (
                mseq(&spec)?,
                json!({ "kind": "mseq", "poly": format!("{:#x}", spec.poly()), "state": format!("{:#x}", spec.initial_state()) }),
            )
        }
        GenCommand::Legendre(args) => (legendre(args.p)?, json!({ "kind": "legendre", "p": args.p })),
        GenCommand::Random(args) => {
            let seed = resolve_seed(args.seed, out)?;
            let mut rng = rng_from_seed(seed);
            (random_sequence(args.n, &mut rng)?, json!({ "kind": "random", "seed": seed }))
        }
    };
    let hex = encode_hex(&b);
    let mut value = json!({ "n": b.len(), "hex": hex, "psl": psl(&b) });
    if let (Value::Object(map), Value::Object(more)) = (&mut value, extra) {
        map.extend(more);
    }
    out.emit(&value, || hex.clone())?;
    Ok(())
}

fn lfsr_spec(args: &MseqArgs) -> CliResult<LfsrSpec> {
    Ok(LfsrSpec::new(parse_hex_u64(&args.poly, "--poly")?, parse_hex_u64(&args.state, "--state")?)?)
}

fn cmd_exhaustive<W: Write>(args: &ExhaustiveArgs, out: &mut Output<W>) -> CliResult<()> {
    let (p, witness) = exhaustive_psl_with_cap(args.n, args.cap)?;
    let hex = encode_hex(&witness);
    out.emit(&json!({ "n": args.n, "psl": p, "witness": hex }), || format!("psl {p}\nwitness {hex}"))?;
    Ok(())
}

fn cmd_verify_table<W: Write>(args: &VerifyTableArgs, out: &mut Output<W>) -> CliResult<()> {
    let report = verify_known_table();
    for check in &report.checks {
        let value = json!({
            "n": check.entry.n,
            "hex": check.entry.hex,
            "expected": check.entry.psl,
            "computed": check.computed,
            "error": check.error,
            "pass": check.passed(),
        });
        out.data(&value)?;
        if args.verbose || !check.passed() {
            let computed = check.computed.map_or_else(|| "-".to_string(), |c| c.to_string());
            let status = if check.passed() { "ok" } else { "MISMATCH" };
            out.note(&format!(
                "{:>4} {} expected {} computed {} {}",
                check.entry.n, check.entry.hex, check.entry.psl, computed, status
            ))?;
        }
    }
    let failed = report.mismatches().count();
    out.note(&format!("{} entries checked, {} mismatches", report.checks.len(), failed))?;
    if failed > 0 {
        return fail(format!("{failed} table entries do not match their stated PSL"));
    }
    Ok(())
}

fn cmd_hybrid<W: Write>(hybrid: &HybridCommand, out: &mut Output<W>) -> CliResult<()> {
    let (search, n_hint) = match hybrid {
        HybridCommand::Mseq { generator, search } => (search, lfsr_spec(generator)?.period() as usize),
        HybridCommand::Legendre { generator, search } => (search, generator.p as usize),
    };
    let fitness = FitnessSpec::new(search.alpha.unwrap_or_else(|| default_alpha(n_hint)))?;
    let threads = resolve_threads(search.threads)?;
    let stop = stop_criteria(search)?;
    let seed = resolve_seed(search.seed, out)?;
    let mut config = HybridConfig::new(fitness, search.threshold, seed);
    config.restarts = search.restarts;
    config.threads = threads;
    config.stop = stop;
    config.acceptance = acceptance(search.acceptance);
    let record = match hybrid {
        HybridCommand::Mseq { generator, .. } => hybrid_mseq(&lfsr_spec(generator)?, &config)?,
        HybridCommand::Legendre { generator, .. } => hybrid_legendre(generator.p, &config)?,
    };
    emit_record(&record, search.results.as_deref(), out)
}
