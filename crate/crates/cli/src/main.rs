//! `qchir` — command-line toolkit for structural chirality of finite
//! quasigroups and their racemization dynamics.
//!
//! Every subcommand reads plain files or flags, prints human text by
//! default or a stable JSON report with `--json`, and follows one exit-code
//! discipline: 0 success, 1 structurally invalid square data, 2 for usage,
//! IO, and size-limit problems. Stochastic commands take `--seed` and are
//! byte-reproducible regardless of `QCHIR_THREADS`. Each run assembles its
//! whole report first and writes standard output exactly once.

mod input;
mod json;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qchir_core::dynamics::{self, TwoStateSpec};
use qchir_core::parastrophe::ParastropheId;
use qchir_core::{intercalates, search, Error, Isotopism, LatinSquare, Perm};

use input::Failure;
use json::Json;

/// Appends one formatted line to a report buffer.
macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        let _ = writeln!($out, $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "qchir",
    version,
    about = "Decide structural chirality of finite quasigroups and simulate racemization dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SquareArg {
    /// Square file: optional '#' comment lines, then n rows of n integers.
    file: PathBuf,
    /// Interpret symbols as 0..n-1 instead of the default 1..n.
    #[arg(long)]
    zero_based: bool,
}

#[derive(Args)]
struct JsonFlag {
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ListFlags {
    /// Print only the count (the default).
    #[arg(long, conflicts_with = "list")]
    count_only: bool,
    /// Print the full lexicographically sorted list of triples.
    #[arg(long)]
    list: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file holds a Latin square.
    Validate {
        #[command(flatten)]
        square: SquareArg,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Decide structural chirality (complete search unless --invariant-only).
    Chiral {
        #[command(flatten)]
        square: SquareArg,
        /// Run the complete mirror-isotopism search (the default).
        #[arg(long, conflicts_with = "invariant_only")]
        complete: bool,
        /// Use only the intercalate-profile certificate; may be inconclusive.
        #[arg(long)]
        invariant_only: bool,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Count (or list) mirror isotopisms, the maps from Q onto its mirror.
    Mir {
        #[command(flatten)]
        square: SquareArg,
        #[command(flatten)]
        list: ListFlags,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Count (or list) autotopisms, the isotopisms from Q onto itself.
    Atp {
        #[command(flatten)]
        square: SquareArg,
        #[command(flatten)]
        list: ListFlags,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Mirror rates of the square and of its mirror, plus the racemic condition.
    Rate {
        #[command(flatten)]
        square: SquareArg,
        /// Weight on channels: constant | constant:C | gamma-cycles:FILE.
        #[arg(long, default_value = "constant")]
        weight: String,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Sample the two-state exchange and compare with the closed form.
    Simulate {
        /// Rate out of state [Q].
        #[arg(long)]
        kq: f64,
        /// Rate out of state [Q#].
        #[arg(long)]
        kqm: f64,
        /// Initial probability of [Q].
        #[arg(long)]
        p0: f64,
        /// End of the observation window.
        #[arg(long)]
        t_max: f64,
        /// Number of equally spaced grid times from 0 to t-max.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(2..=100_000))]
        grid: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Count all Latin squares of a small order.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        order: u8,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Partition all Latin squares of a small order into isotopy classes.
    Classes {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        order: u8,
        /// Suppress the class representatives.
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Verify that the full jump chain descends to the two-state class dynamics.
    Descent {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        order: u8,
        /// Weight on channels: constant | constant:C | gamma-cycles:FILE.
        #[arg(long, default_value = "constant")]
        weight: String,
        /// End of the simulated window.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: JsonFlag,
    },
    /// Emit a parastrophe of the square (the mirror by default), or check
    /// which parastrophes stay inside the square's isotopy class.
    Parastrophe {
        #[command(flatten)]
        square: SquareArg,
        /// Role permutation: id, rc, rs, cs, rcs, or rsc.
        #[arg(long, default_value = "rc")]
        pi: String,
        /// Report per-parastrophe class membership instead of emitting.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: JsonFlag,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
            {
                Ok(()) => {}
                // The reader hung up (e.g. piped into `head`); nothing is wrong.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                Err(e) => {
                    eprintln!("error[Io]: {e}");
                    std::process::exit(2);
                }
            }
        }
        Err(f) => {
            eprintln!("error[{}]: {}", f.code, f.message);
            std::process::exit(f.exit);
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Validate { square, out } => cmd_validate(&square, out.json),
        Command::Chiral {
            square,
            invariant_only,
            out,
            ..
        } => cmd_chiral(&square, invariant_only, out.json),
        Command::Mir { square, list, out } => {
            cmd_isotopism_set(&square, Set::Mir, list.list, out.json)
        }
        Command::Atp { square, list, out } => {
            cmd_isotopism_set(&square, Set::Atp, list.list, out.json)
        }
        Command::Rate {
            square,
            weight,
            out,
        } => cmd_rate(&square, &weight, out.json),
        Command::Simulate {
            kq,
            kqm,
            p0,
            t_max,
            grid,
            samples,
            seed,
            out,
        } => cmd_simulate(kq, kqm, p0, t_max, grid, samples, seed, out.json),
        Command::Enumerate { order, out } => cmd_enumerate(order as usize, out.json),
        Command::Classes {
            order,
            count_only,
            out,
        } => cmd_classes(order as usize, count_only, out.json),
        Command::Descent {
            order,
            weight,
            t,
            samples,
            seed,
            out,
        } => cmd_descent(order as usize, &weight, t, samples, seed, out.json),
        Command::Parastrophe {
            square,
            pi,
            check,
            out,
        } => cmd_parastrophe(&square, &pi, check, out.json),
    }
}

// ---------------------------------------------------------------- helpers

fn square_inputs(square: &SquareArg) -> Vec<(&'static str, Json)> {
    vec![
        ("file", Json::str(square.file.display().to_string())),
        ("one_based", Json::Bool(!square.zero_based)),
    ]
}

fn one_based(p: &Perm) -> Vec<Json> {
    p.images()
        .iter()
        .map(|&y| Json::UInt(u64::from(y) + 1))
        .collect()
}

fn perm_text(p: &Perm) -> String {
    let images: Vec<String> = p.images().iter().map(|&y| (y + 1).to_string()).collect();
    format!("[{}]", images.join(" "))
}

fn isotopism_text(g: &Isotopism) -> String {
    format!(
        "alpha={} beta={} gamma={}",
        perm_text(g.alpha()),
        perm_text(g.beta()),
        perm_text(g.gamma())
    )
}

fn isotopism_json(g: &Isotopism) -> Json {
    Json::Obj(vec![
        ("alpha", Json::Arr(one_based(g.alpha()))),
        ("beta", Json::Arr(one_based(g.beta()))),
        ("gamma", Json::Arr(one_based(g.gamma()))),
    ])
}

/// Rows as arrays of 1-based symbols (the display convention for reports).
fn square_json(q: &LatinSquare) -> Json {
    let rows = (0..q.order())
        .map(|r| {
            Json::Arr(
                q.row(r)
                    .iter()
                    .map(|&s| Json::UInt(u64::from(s) + 1))
                    .collect(),
            )
        })
        .collect();
    Json::Arr(rows)
}

// --------------------------------------------------------------- commands

fn cmd_validate(square: &SquareArg, as_json: bool) -> Result<String, Failure> {
    let q = input::read_square(&square.file, square.zero_based)?;
    if as_json {
        let results = Json::Obj(vec![
            ("valid", Json::Bool(true)),
            ("order", Json::UInt(q.order() as u64)),
            ("commutative", Json::Bool(q.is_commutative())),
        ]);
        return Ok(json::render(&json::report(
            "validate",
            square_inputs(square),
            results,
            None,
        )));
    }
    let mut out = String::new();
    outln!(out, "valid latin square of order {}", q.order());
    outln!(out, "commutative: {}", q.is_commutative());
    Ok(out)
}

fn cmd_chiral(square: &SquareArg, invariant_only: bool, as_json: bool) -> Result<String, Failure> {
    let q = input::read_square(&square.file, square.zero_based)?;
    let mut inputs = square_inputs(square);
    inputs.push((
        "mode",
        Json::str(if invariant_only {
            "invariant-only"
        } else {
            "complete"
        }),
    ));

    if invariant_only {
        let certified = intercalates::mirror_invariant_separates(&q);
        let verdict = if certified {
            "structurally chiral (certified by invariant)"
        } else {
            "inconclusive"
        };
        if as_json {
            let results = Json::Obj(vec![
                ("verdict", Json::str(verdict)),
                ("chiral_certified", Json::Bool(certified)),
            ]);
            return Ok(json::render(&json::report("chiral", inputs, results, None)));
        }
        let mut out = String::new();
        outln!(out, "verdict: {verdict}");
        if !certified {
            outln!(
                out,
                "the profile invariant does not separate; run the complete search"
            );
        }
        return Ok(out);
    }

    input::require_searchable_order(&q)?;
    let certified = intercalates::mirror_invariant_separates(&q);
    // A separating invariant already proves the mirror set empty; otherwise
    // the complete search settles the verdict either way.
    let mir_count = if certified {
        0
    } else {
        search::mirror_isotopisms(&q).len()
    };
    let chiral = mir_count == 0;
    let verdict = if chiral {
        "structurally chiral"
    } else {
        "achiral"
    };
    if as_json {
        let results = Json::Obj(vec![
            ("verdict", Json::str(verdict)),
            ("chiral", Json::Bool(chiral)),
            ("mirror_isotopism_count", Json::UInt(mir_count as u64)),
            ("invariant_certified", Json::Bool(certified)),
        ]);
        return Ok(json::render(&json::report("chiral", inputs, results, None)));
    }
    let mut out = String::new();
    outln!(out, "verdict: {verdict}");
    outln!(out, "mirror isotopisms: {mir_count}");
    outln!(
        out,
        "invariant certificate: {}",
        if certified {
            "profiles differ (search skipped)"
        } else {
            "inconclusive (complete search ran)"
        }
    );
    Ok(out)
}

enum Set {
    Mir,
    Atp,
}

fn cmd_isotopism_set(
    square: &SquareArg,
    set: Set,
    list: bool,
    as_json: bool,
) -> Result<String, Failure> {
    let q = input::read_square(&square.file, square.zero_based)?;
    input::require_searchable_order(&q)?;
    let (name, isotopisms) = match set {
        Set::Mir => ("mir", search::mirror_isotopisms(&q)),
        Set::Atp => ("atp", search::autotopisms(&q)),
    };
    if as_json {
        let mut results = vec![("count", Json::UInt(isotopisms.len() as u64))];
        if list {
            results.push((
                "isotopisms",
                Json::Arr(isotopisms.iter().map(isotopism_json).collect()),
            ));
        }
        return Ok(json::render(&json::report(
            name,
            square_inputs(square),
            Json::Obj(results),
            None,
        )));
    }
    let mut out = String::new();
    outln!(out, "count: {}", isotopisms.len());
    if list {
        for g in &isotopisms {
            outln!(out, "{}", isotopism_text(g));
        }
    }
    Ok(out)
}

fn cmd_rate(square: &SquareArg, weight: &str, as_json: bool) -> Result<String, Failure> {
    let q = input::read_square(&square.file, square.zero_based)?;
    input::require_searchable_order(&q)?;
    let w = input::parse_weight(weight, q.order())?;
    let k_q = dynamics::mirror_rate(&q, &w);
    let k_qm = dynamics::mirror_rate(&q.mirror(), &w);
    let racemic = k_q == k_qm;
    let mut inputs = square_inputs(square);
    inputs.push(("weight", Json::str(weight)));
    if as_json {
        let results = Json::Obj(vec![
            ("weight", Json::str(w.describe())),
            ("k_q", Json::Real(k_q)),
            ("k_q_mirror", Json::Real(k_qm)),
            ("racemic_condition", Json::Bool(racemic)),
        ]);
        return Ok(json::render(&json::report("rate", inputs, results, None)));
    }
    let mut out = String::new();
    outln!(out, "weight: {}", w.describe());
    outln!(out, "k([Q])  = {k_q}");
    outln!(out, "k([Q#]) = {k_qm}");
    outln!(out, "racemic condition (equal rates): {racemic}");
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    kq: f64,
    kqm: f64,
    p0: f64,
    t_max: f64,
    grid_points: u32,
    samples: u64,
    seed: u64,
    as_json: bool,
) -> Result<String, Failure> {
    let spec = TwoStateSpec::new(kq, kqm, p0)?;
    if !t_max.is_finite() || t_max < 0.0 {
        return Err(Failure::from(Error::NegativeTime { value: t_max }));
    }
    let grid: Vec<f64> = (0..grid_points)
        .map(|i| t_max * f64::from(i) / f64::from(grid_points - 1))
        .collect();
    let analytic = dynamics::analytic_two_state(&spec, &grid)?;
    let empirical = dynamics::sample_two_state(&spec, t_max, samples, seed, &grid)?;
    let p_analytic = analytic.p_analytic.expect("analytic run fills this");
    let p_empirical = empirical.p_empirical.expect("sampled run fills this");

    if as_json {
        let inputs = vec![
            ("k_q", Json::Real(kq)),
            ("k_q_mirror", Json::Real(kqm)),
            ("p0", Json::Real(p0)),
            ("t_max", Json::Real(t_max)),
            ("grid_points", Json::UInt(u64::from(grid_points))),
            ("samples", Json::UInt(samples)),
        ];
        let trajectory: Vec<Json> = grid
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                Json::Obj(vec![
                    ("t", Json::Real(t)),
                    ("analytic", Json::Real(p_analytic[i])),
                    ("empirical", Json::Real(p_empirical[i].frequency)),
                    ("samples", Json::UInt(p_empirical[i].samples)),
                ])
            })
            .collect();
        let results = Json::Obj(vec![
            ("equilibrium", Json::Real(spec.equilibrium())),
            ("trajectory", Json::Arr(trajectory)),
        ]);
        return Ok(json::render(&json::report(
            "simulate",
            inputs,
            results,
            Some(seed),
        )));
    }
    let mut out = String::new();
    outln!(out, "equilibrium p = {}", spec.equilibrium());
    for (i, &t) in grid.iter().enumerate() {
        outln!(
            out,
            "t={t:<10.6} analytic={:<12.9} empirical={:<12.9} ({} samples)",
            p_analytic[i],
            p_empirical[i].frequency,
            p_empirical[i].samples
        );
    }
    Ok(out)
}

fn cmd_enumerate(order: usize, as_json: bool) -> Result<String, Failure> {
    let count = search::enumerate_latin_squares(order)?.count();
    if as_json {
        let inputs = vec![("order", Json::UInt(order as u64))];
        let results = Json::Obj(vec![("count", Json::UInt(count as u64))]);
        return Ok(json::render(&json::report(
            "enumerate",
            inputs,
            results,
            None,
        )));
    }
    Ok(format!("order {order}: {count} latin squares\n"))
}

fn cmd_classes(order: usize, count_only: bool, as_json: bool) -> Result<String, Failure> {
    let squares: Vec<LatinSquare> = search::enumerate_latin_squares(order)?.collect();
    let partition = search::isotopy_classes(&squares)?;
    let sizes = partition.class_sizes();
    if as_json {
        let inputs = vec![("order", Json::UInt(order as u64))];
        let mut results = vec![
            ("square_count", Json::UInt(squares.len() as u64)),
            ("class_count", Json::UInt(partition.class_count() as u64)),
            (
                "class_sizes",
                Json::Arr(sizes.iter().map(|&s| Json::UInt(s as u64)).collect()),
            ),
        ];
        if !count_only {
            let classes: Vec<Json> = partition
                .representatives()
                .iter()
                .zip(&sizes)
                .map(|(rep, &size)| {
                    Json::Obj(vec![
                        ("size", Json::UInt(size as u64)),
                        ("representative", square_json(rep)),
                    ])
                })
                .collect();
            results.push(("classes", Json::Arr(classes)));
        }
        return Ok(json::render(&json::report(
            "classes",
            inputs,
            Json::Obj(results),
            None,
        )));
    }
    let mut out = String::new();
    outln!(
        out,
        "order {order}: {} squares, {} isotopy {}",
        squares.len(),
        partition.class_count(),
        plural(partition.class_count(), "class", "classes")
    );
    if !count_only {
        for (c, (rep, size)) in partition.representatives().iter().zip(&sizes).enumerate() {
            outln!(out, "class {} (size {size}):", c + 1);
            out.push_str(&rep.to_text(true));
        }
    }
    Ok(out)
}

fn cmd_descent(
    order: usize,
    weight: &str,
    t: f64,
    samples: u64,
    seed: u64,
    as_json: bool,
) -> Result<String, Failure> {
    let w = input::parse_weight(weight, order)?;
    let report = dynamics::full_state_descent_check(order, &w, t, samples, seed)?;
    if as_json {
        let inputs = vec![
            ("order", Json::UInt(order as u64)),
            ("weight", Json::str(weight)),
            ("t_max", Json::Real(t)),
            ("samples", Json::UInt(samples)),
        ];
        let occupations: Vec<Json> = report
            .occupations
            .iter()
            .map(|g| {
                let classes: Vec<Json> = g
                    .classes
                    .iter()
                    .map(|c| {
                        Json::Obj(vec![
                            ("predicted", Json::Real(c.predicted)),
                            ("empirical", Json::Real(c.empirical)),
                            ("sigma", Json::Real(c.sigma)),
                            ("within_three_sigma", Json::Bool(c.within_three_sigma)),
                        ])
                    })
                    .collect();
                Json::Obj(vec![
                    ("t", Json::Real(g.time)),
                    ("classes", Json::Arr(classes)),
                ])
            })
            .collect();
        let results = Json::Obj(vec![
            ("square_count", Json::UInt(report.square_count as u64)),
            ("class_count", Json::UInt(report.class_count as u64)),
            (
                "class_sizes",
                Json::Arr(
                    report
                        .class_sizes
                        .iter()
                        .map(|&s| Json::UInt(s as u64))
                        .collect(),
                ),
            ),
            (
                "class_rates",
                Json::Arr(report.class_rates.iter().map(|&r| Json::Real(r)).collect()),
            ),
            ("weight", Json::str(report.weight.clone())),
            ("mirror_only_pass", Json::Bool(report.mirror_only_pass)),
            (
                "transitions_checked",
                Json::UInt(report.transitions_checked),
            ),
            (
                "gauge_invariance_pass",
                Json::Bool(report.gauge_invariance_pass),
            ),
            (
                "gauge_pairs_tested",
                Json::UInt(u64::from(report.gauge_pairs_tested)),
            ),
            (
                "class_rate_constant_pass",
                Json::Bool(report.class_rate_constant_pass),
            ),
            ("mirror_fixed_pass", Json::Bool(report.mirror_fixed_pass)),
            ("occupation", Json::Arr(occupations)),
            ("pass", Json::Bool(report.pass)),
        ]);
        return Ok(json::render(&json::report(
            "descent",
            inputs,
            results,
            Some(seed),
        )));
    }
    let mut out = String::new();
    outln!(
        out,
        "order {}: {} squares, {} isotopy {}, sizes {:?}",
        report.order,
        report.square_count,
        report.class_count,
        plural(report.class_count, "class", "classes"),
        report.class_sizes
    );
    outln!(out, "weight: {}", report.weight);
    outln!(out, "class rates: {:?}", report.class_rates);
    outln!(
        out,
        "mirror-only targets: {} ({} transitions checked)",
        pass_str(report.mirror_only_pass),
        report.transitions_checked
    );
    outln!(
        out,
        "gauge invariance (channel transport): {} ({} relabeling pairs)",
        pass_str(report.gauge_invariance_pass),
        report.gauge_pairs_tested
    );
    outln!(
        out,
        "class-rate constancy: {}",
        pass_str(report.class_rate_constant_pass)
    );
    outln!(
        out,
        "mirror-fixed classes: {}",
        pass_str(report.mirror_fixed_pass)
    );
    let within = report
        .occupations
        .iter()
        .filter(|g| g.classes.iter().all(|c| c.within_three_sigma))
        .count();
    outln!(
        out,
        "occupation vs prediction (3 sigma): {} at {}/{} grid times over {} samples",
        pass_str(within == report.occupations.len()),
        within,
        report.occupations.len(),
        report.n_samples
    );
    outln!(
        out,
        "descent check: {}",
        if report.pass { "PASS" } else { "FAIL" }
    );
    Ok(out)
}

fn pass_str(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn plural<'a>(n: usize, one: &'a str, many: &'a str) -> &'a str {
    if n == 1 {
        one
    } else {
        many
    }
}

fn cmd_parastrophe(
    square: &SquareArg,
    pi: &str,
    check: bool,
    as_json: bool,
) -> Result<String, Failure> {
    let q = input::read_square(&square.file, square.zero_based)?;
    if check {
        input::require_searchable_order(&q)?;
        let verdicts = search::parastrophe_class_check(&q);
        if as_json {
            let mut inputs = square_inputs(square);
            inputs.push(("mode", Json::str("check")));
            let checks: Vec<(&'static str, Json)> = verdicts
                .iter()
                .map(|(id, &same)| (id.token(), Json::Bool(same)))
                .collect();
            let results = Json::Obj(vec![("same_class", Json::Obj(checks))]);
            return Ok(json::render(&json::report(
                "parastrophe",
                inputs,
                results,
                None,
            )));
        }
        let mut out = String::new();
        for (id, same) in &verdicts {
            outln!(out, "{}: same isotopy class: {same}", id.token());
        }
        return Ok(out);
    }
    let id = ParastropheId::from_token(pi).ok_or_else(|| {
        Failure::usage(
            "BadParastrophe",
            format!("unknown parastrophe {pi:?}; use id, rc, rs, cs, rcs, or rsc"),
        )
    })?;
    let r = q.parastrophe(id);
    if as_json {
        let mut inputs = square_inputs(square);
        inputs.push(("pi", Json::str(pi)));
        let results = Json::Obj(vec![
            ("order", Json::UInt(r.order() as u64)),
            ("square", square_json(&r)),
        ]);
        return Ok(json::render(&json::report(
            "parastrophe",
            inputs,
            results,
            None,
        )));
    }
    // Bare square text in the input's convention, so output re-parses with
    // the same flags.
    Ok(r.to_text(!square.zero_based))
}
