use std::fs;
use std::path::Path;
use std::time::Instant;

use lieinv_core::engine::{assemble, content_hash, InvariantDocument};
use lieinv_core::kostant::FKind;
use lieinv_core::rational::rat;
use lieinv_core::rootdata::root_label;
use lieinv_core::{
    compute_valuedata, generate_terms, verify_invariant, Checkpoint, Family, GVector,
    InvariantPolynomial, KostantFrame, LieAlgebraTable, Poly, Rational, RunOptions, Scope,
    SeedSpec, VarNames,
};
use serde_json::json;

use crate::cache::{cache_root, Entry, Manifest, Timings};
use crate::{AlgebraArgs, CliError, ComputeArgs, Format, Outcome, TermsArgs, TypeArgs, VerifyArgs};

type Result<T> = std::result::Result<T, CliError>;

fn build(ty: &TypeArgs) -> Result<LieAlgebraTable> {
    Ok(LieAlgebraTable::new(ty.family, ty.rank)?)
}

/// `c1*n1 + c2*n2`, with unit coefficients dropped.
fn linear_text<'a>(terms: impl Iterator<Item = (String, &'a Rational)>) -> String {
    let one = rat(1);
    let parts: Vec<String> = terms
        .map(|(name, c)| {
            if *c == one {
                name
            } else if *c == -rat(1) {
                format!("-{name}")
            } else {
                format!("{c}*{name}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn vector_text(alg: &LieAlgebraTable, v: &GVector) -> String {
    linear_text(v.support().map(|(i, c)| (alg.basis_label(i), c)))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

pub fn algebra(args: &AlgebraArgs) -> Result<Outcome> {
    let alg = build(&args.ty)?;
    if args.format == Format::Json {
        println!("{}", alg.to_json()?);
        return Ok(Outcome::Success);
    }
    let rs = &alg.roots;
    println!("{}  dim {}  rank {}", alg.label(), alg.dim, alg.rank());
    println!("cartan matrix (row i: alpha_j(H_i))");
    for row in &rs.cartan_matrix {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        println!("  {}", cells.join(""));
    }
    println!("exponents {:?}", rs.exponents());
    println!("positive roots ({})", rs.num_positive());
    for (r, h) in rs.positive_roots.iter().zip(&rs.heights) {
        println!("  {:<16} height {h}", root_label(r));
    }
    Ok(Outcome::Success)
}

pub fn frame(args: &AlgebraArgs) -> Result<Outcome> {
    let alg = build(&args.ty)?;
    let frame = KostantFrame::new(&alg)?;
    if args.format == Format::Json {
        println!("{}", frame.to_json()?);
        return Ok(Outcome::Success);
    }
    println!("{}  exponents {:?}", alg.label(), frame.exponents);
    println!("epsilon = {}", vector_text(&alg, &frame.epsilon));
    for (j, s) in frame.slice.iter().enumerate() {
        println!("s{} = {}", j + 1, vector_text(&alg, s));
    }
    if frame.used_fallback {
        println!("(slice uses a non-root-vector complement)");
    }
    println!("f-basis");
    for k in 0..frame.dim() {
        let kind = match frame.f_kind[k] {
            FKind::Cartan(i) => format!("H{}", i + 1),
            FKind::NegSimple(i) => format!("e_-a{}", i + 1),
            FKind::Cyclic { j, k } => format!("s{}^{}", j + 1, k),
        };
        let pre = match frame.preimage(k) {
            Some(v) => format!(
                "  <- {}",
                linear_text(v.iter().map(|(i, c)| (frame.f_label(*i), c)))
            ),
            None => String::new(),
        };
        println!(
            "  {:<4} h={:<3} {:<8} {}{}",
            frame.f_label(k),
            frame.f_height[k],
            kind,
            vector_text(&alg, &frame.f_vectors[k]),
            pre
        );
    }
    Ok(Outcome::Success)
}

pub fn terms(args: &TermsArgs) -> Result<Outcome> {
    let alg = build(&args.ty)?;
    let frame = KostantFrame::new(&alg)?;
    let lists = generate_terms(&frame, args.degree, args.scope.into());
    let counts = lists.counts();
    match (args.format, args.counts) {
        (Format::Json, true) => print_json(&json!({
            "algebra": alg.label(),
            "degree": args.degree,
            "scope": Scope::from(args.scope),
            "counts": counts,
            "total": counts.total(),
        }))?,
        (Format::Json, false) => print_json(&json!({
            "algebra": alg.label(),
            "degree": args.degree,
            "scope": Scope::from(args.scope),
            "ttms": lists.ttms,
            "ptms": lists.ptms,
            "pure_cartan": lists.pure_cartan,
            "ntms": lists.ntms,
        }))?,
        (Format::Text, true) => println!("{counts}"),
        (Format::Text, false) => {
            println!("# {counts}");
            for (name, keys) in [
                ("ttms", &lists.ttms),
                ("ptms", &lists.ptms),
                ("pure", &vec![lists.pure_cartan.clone()]),
                ("ntms", &lists.ntms),
            ] {
                for k in keys {
                    println!("{name} {}", k.label());
                }
            }
        }
    }
    Ok(Outcome::Success)
}

fn parse_seed(frame: &KostantFrame, s: &str) -> Result<Poly> {
    Ok(Poly::parse_text(s, &VarNames::slice(frame.rank()))?)
}

fn seed_list(frame: &KostantFrame, args: &ComputeArgs) -> Result<Vec<SeedSpec>> {
    if let Some(s) = &args.seed {
        return Ok(vec![SeedSpec::generic(parse_seed(frame, s)?)]);
    }
    if args.index == "all" {
        return (1..=frame.rank())
            .map(|j| Ok(SeedSpec::primitive(frame, j)?))
            .collect();
    }
    let j: usize = args.index.parse().map_err(|_| {
        CliError::Config(format!(
            "--index must be a number or `all`, got {:?}",
            args.index
        ))
    })?;
    Ok(vec![SeedSpec::primitive(frame, j)?])
}

fn file_stem(alg: &LieAlgebraTable, inv: &InvariantPolynomial, hash: &str) -> String {
    match inv.index {
        Some(j) => format!("{}_{}_I{j}", alg.label(), inv.scope),
        None => format!(
            "{}_{}_d{}_{}",
            alg.label(),
            inv.scope,
            inv.degree,
            &hash[..12]
        ),
    }
}

pub fn compute(args: &ComputeArgs, verbose: u8) -> Result<Outcome> {
    let scope: Scope = args.scope.into();
    if args.ty.family == Family::E
        && args.ty.rank >= 7
        && scope == Scope::Full
        && !args.allow_long_run
    {
        return Err(CliError::Config(format!(
            "full-scope E{} runs take very long; pass --allow-long-run to proceed or use --scope borel",
            args.ty.rank
        )));
    }
    if args.threads == 0 {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let t0 = Instant::now();
    let alg = build(&args.ty)?;
    let frame = KostantFrame::new(&alg)?;
    let frame_ms = t0.elapsed().as_millis();
    let seeds = seed_list(&frame, args)?;
    let root = cache_root(args.cache_dir.as_deref());
    if let Some(out) = &args.output {
        fs::create_dir_all(out)?;
    }
    let slice_names = VarNames::slice(frame.rank());
    let mut manifests = Vec::new();
    let mut results = Vec::new();
    let mut incomplete = false;
    for seed in &seeds {
        let d = seed.degree(&frame)?;
        let hash = content_hash(&frame, d, scope, seed);
        let entry = Entry::new(&root, &hash);
        fs::create_dir_all(&entry.dir)?;
        let mut timings = Timings {
            frame: frame_ms,
            ..Timings::default()
        };
        let t = Instant::now();
        let terms = generate_terms(&frame, d, scope);
        let counts = terms.counts();
        let nstrata = lieinv_core::engine::strata(&frame, &terms).len();
        timings.terms = t.elapsed().as_millis();

        let cached = if args.no_cache || !entry.invariant().exists() {
            None
        } else {
            let inv =
                InvariantPolynomial::from_json(&alg, &fs::read_to_string(entry.invariant())?)?;
            (inv.degree == d && inv.scope == scope).then_some(inv)
        };
        let from_cache = cached.is_some();
        let (inv, completed) = match cached {
            Some(inv) => (Some(inv), nstrata),
            None => {
                let resume = if args.resume && entry.checkpoint().exists() {
                    Some(Checkpoint::load(&entry.checkpoint())?)
                } else {
                    None
                };
                let options = RunOptions {
                    threads: args.threads,
                    stop_after: args.stop_after,
                    resume,
                    checkpoint_path: Some(entry.checkpoint()),
                };
                let t = Instant::now();
                let table = compute_valuedata(&frame, seed, d, scope, &options)?;
                timings.values = t.elapsed().as_millis();
                if table.is_complete() {
                    let t = Instant::now();
                    let mut inv = assemble(&table, &frame, scope)?;
                    inv.index = seed.index;
                    timings.assemble = t.elapsed().as_millis();
                    fs::write(entry.invariant(), inv.to_json(&alg)?)?;
                    (Some(inv), table.completed_strata)
                } else {
                    (None, table.completed_strata)
                }
            }
        };
        let manifest = Manifest {
            hash: hash.clone(),
            algebra: alg.label(),
            degree: d,
            scope: scope.to_string(),
            index: seed.index,
            seed: seed.target.to_text(&slice_names),
            counts,
            strata: nstrata,
            completed_strata: completed,
            terms_in_result: inv.as_ref().map_or(0, |i| i.poly.len()),
            millis: timings,
            from_cache,
        };
        fs::write(entry.manifest(), serde_json::to_string_pretty(&manifest)?)?;
        if verbose > 0 {
            let m = &manifest.millis;
            eprintln!(
                "{} d={d} {scope}: {counts}; {} strata; frame {} ms, terms {} ms, values {} ms, assemble {} ms{}",
                alg.label(),
                nstrata,
                m.frame,
                m.terms,
                m.values,
                m.assemble,
                if from_cache { " (cached)" } else { "" }
            );
        }
        match inv {
            Some(inv) => results.push((inv, hash)),
            None => {
                incomplete = true;
                eprintln!(
                    "stopped after {completed}/{nstrata} strata; checkpoint at {} (rerun with --resume)",
                    entry.checkpoint().display()
                );
            }
        }
        manifests.push(manifest);
    }

    match &args.output {
        Some(out) => {
            for (inv, hash) in &results {
                write_invariant(out, &alg, inv, hash, args.format)?;
            }
            fs::write(
                out.join("manifest.json"),
                serde_json::to_string_pretty(&manifests)?,
            )?;
        }
        None => emit_stdout(&alg, &results, args.format)?,
    }
    if incomplete && verbose > 0 {
        eprintln!("some invariants are incomplete");
    }
    Ok(Outcome::Success)
}

fn write_invariant(
    out: &Path,
    alg: &LieAlgebraTable,
    inv: &InvariantPolynomial,
    hash: &str,
    format: Format,
) -> Result<()> {
    let stem = file_stem(alg, inv, hash);
    match format {
        Format::Json => fs::write(out.join(format!("{stem}.json")), inv.to_json(alg)?)?,
        Format::Text => fs::write(out.join(format!("{stem}.txt")), inv.to_text(alg) + "\n")?,
    }
    Ok(())
}

fn emit_stdout(
    alg: &LieAlgebraTable,
    results: &[(InvariantPolynomial, String)],
    format: Format,
) -> Result<()> {
    if results.is_empty() {
        return Ok(());
    }
    match format {
        Format::Json => {
            let docs: Vec<InvariantDocument> =
                results.iter().map(|(i, _)| i.to_document(alg)).collect();
            if let [one] = docs.as_slice() {
                print_json(one)?;
            } else {
                print_json(&docs)?;
            }
        }
        Format::Text => {
            let cartan = VarNames::cartan(alg.rank());
            for (inv, _) in results {
                let name = match inv.index {
                    Some(j) => format!("I{j}"),
                    None => "I".into(),
                };
                println!(
                    "# {} {name} degree {} ({}, {} terms)",
                    alg.label(),
                    inv.degree,
                    inv.scope,
                    inv.poly.len()
                );
                println!("{}", inv.to_text(alg));
                println!("# on h: {}", inv.cartan.to_text(&cartan));
            }
        }
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let text = fs::read_to_string(&args.input)?;
    let doc: InvariantDocument = serde_json::from_str(&text)?;
    let alg = LieAlgebraTable::new(doc.family, doc.rank)?;
    let frame = KostantFrame::new(&alg)?;
    let inv = InvariantPolynomial::from_document(&alg, &doc)?;
    let target = match (&args.seed, inv.index) {
        (Some(s), _) => parse_seed(&frame, s)?,
        (None, Some(j)) => SeedSpec::primitive(&frame, j)?.target,
        (None, None) => {
            return Err(CliError::Config(
                "file has no slice index; pass the target with --seed".into(),
            ))
        }
    };
    let report = verify_invariant(&inv, &frame, &target)?;
    match args.format {
        Format::Json => println!("{}", report.to_json()?),
        Format::Text => {
            print!("{report}");
            if inv.scope == Scope::Borel {
                println!("note: borel-scope file, invariance under all of g was not checked");
            }
            println!(
                "{}",
                if report.passed() {
                    "verified"
                } else {
                    "FAILED"
                }
            );
        }
    }
    Ok(if report.passed() {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}
