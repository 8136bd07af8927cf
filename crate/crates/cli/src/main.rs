//! `odometer`: classify, iterate and verify rotated odometers from the shell.
//!
//! Exit status is 0 when every check passes, 1 when a check finds a mismatch
//! or counterexample, and 2 on malformed input. Nothing is written to stdout
//! on status 2.

mod human;

use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use odometer_core::analysis::{
    self, crosscheck_bound, enumerate_all, theorem_appl_pipeline, verify_odometer, ApplOptions,
    CrosscheckOutcome, EnumerationMode, VerifyOptions,
};
use odometer_core::correspondence::{self, Side};
use odometer_core::interval_maps::MAX_N;
use odometer_core::{
    BoundaryPoint, Dyadic, Permutation, RotatedOdometer, TreeAutomorphism,
};
use serde_json::json;

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "odometer", version, about = "Rotated odometers F_π = vnk ∘ R_π on [0,1)")]
struct Cli {
    /// Output mode.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Args, Clone)]
struct OdometerArgs {
    /// log2 of the number of exchanged intervals.
    #[arg(long = "N")]
    n: u32,
    /// Rotation π, as images ("3,1,2,0") or cycles ("(0 3)").
    #[arg(long)]
    perm: String,
}

#[derive(Subcommand)]
enum Command {
    /// Classify F_π into its minimal and periodic parts.
    Analyze {
        #[command(flatten)]
        od: OdometerArgs,
        /// Oracle level K (default N + 2).
        #[arg(long)]
        level: Option<u32>,
        /// Oracle step bound (default 4·2^N).
        #[arg(long)]
        bound: Option<u64>,
        /// Report only, without the brute-force cross-check.
        #[arg(long)]
        skip_oracle: bool,
    },
    /// Iterate F_π on a dyadic point, or a tree automorphism on a boundary point.
    Orbit {
        #[arg(long = "N")]
        n: Option<u32>,
        #[arg(long)]
        perm: Option<String>,
        /// Automaton file or builtin name (a, sigma, id).
        #[arg(long)]
        aut: Option<String>,
        /// A dyadic "p/2^n", or a boundary point "w1·u(v)^∞" with --aut.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Check the tree model against F_π on random points, and the
    /// classification against the oracle.
    Verify {
        #[command(flatten)]
        od: OdometerArgs,
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of random starting points (0 is always included).
        #[arg(long, default_value_t = 20)]
        sample: usize,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Classify every π (N <= 3) or a seeded sample of them.
    Enumerate {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, conflicts_with = "sample")]
        exhaustive: bool,
        /// Number of random permutations to classify.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Graft a binary-tree automorphism onto T_N.
    Graft {
        #[arg(long)]
        aut: String,
        #[arg(long = "N")]
        n: u32,
    },
    /// Realize a ∘ g by a rotated odometer, for g of finite depth.
    Appl {
        /// Automaton file or builtin name.
        #[arg(long, conflicts_with = "m")]
        aut: Option<String>,
        /// Depth of g when given as a level table with --perm.
        #[arg(long, requires = "perm")]
        m: Option<usize>,
        /// Level-m table of g, as images of the 2^m words in lexicographic order.
        #[arg(long)]
        perm: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = 16)]
        sample: usize,
    },
    /// Boundary coding of a dyadic point.
    Encode {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value_t = SideArg::Upper)]
        side: SideArg,
    },
    /// The point coded by a boundary path.
    Decode {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        point: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Upper,
    Lower,
}

/// Input that cannot be acted on; reported with exit status 2.
struct Usage(String);

fn usage(field: &str, e: impl Display) -> Usage {
    Usage(format!("--{field}: {e}"))
}

struct Outcome {
    stdout: String,
    passed: bool,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Outcome {
            stdout,
            passed: true,
        }
    }
}

/// Oracle errors name the flag they came from (`level` or `bound`).
fn oracle_usage(e: odometer_core::Error) -> Usage {
    match e {
        odometer_core::Error::InvalidArgument { what, .. } => usage(what, e),
        _ => usage("level", e),
    }
}

fn check_n(n: u32) -> Result<u32, Usage> {
    if n == 0 || n > MAX_N {
        Err(usage("N", format!("must satisfy 1 <= N <= {MAX_N}")))
    } else {
        Ok(n)
    }
}

fn odometer(n: u32, perm: &str) -> Result<RotatedOdometer, Usage> {
    let n = check_n(n)?;
    let pi = Permutation::parse(perm, Some(1 << n)).map_err(|e| usage("perm", e))?;
    RotatedOdometer::new(n, pi).map_err(|e| usage("perm", e))
}

fn dyadic(field: &str, text: &str) -> Result<Dyadic, Usage> {
    text.parse().map_err(|e| usage(field, e))
}

fn automaton(spec: &str) -> Result<TreeAutomorphism, Usage> {
    let text = if Path::new(spec).is_file() {
        std::fs::read_to_string(spec).map_err(|e| usage("aut", e))?
    } else {
        spec.to_string()
    };
    TreeAutomorphism::parse_automaton(&text).map_err(|e| usage("aut", e))
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<Outcome, Usage> {
    let structured = cli.format == Format::Structured;
    match cli.command {
        Command::Analyze {
            od,
            level,
            bound,
            skip_oracle,
        } => {
            let od = odometer(od.n, &od.perm)?;
            let mut report = analysis::classify(&od).map_err(|e| usage("perm", e))?;
            let oracle = if skip_oracle {
                None
            } else {
                let level = level.unwrap_or(od.n() + 2);
                let bound = bound.unwrap_or_else(|| crosscheck_bound(&report));
                let outcome = analysis::oracle_crosscheck(&od, &report, level, bound)
                    .map_err(oracle_usage)?;
                report.verified = outcome.passed();
                Some(outcome)
            };
            let passed = oracle.as_ref().is_none_or(CrosscheckOutcome::passed);
            let stdout = if structured {
                pretty(&report)
            } else {
                human::report(&report, oracle.as_ref())
            };
            Ok(Outcome { stdout, passed })
        }

        Command::Orbit {
            n,
            perm,
            aut,
            point,
            steps,
        } => match (aut, n, perm) {
            (Some(aut), None, None) => {
                let g = automaton(&aut)?;
                let mut b: BoundaryPoint = point.parse().map_err(|e| usage("point", e))?;
                let mut points = vec![b.clone()];
                for _ in 0..steps {
                    b = g.apply_boundary(&b).map_err(|e| usage("point", e))?;
                    points.push(b.clone());
                }
                Ok(Outcome::pass(if structured {
                    pretty(&json!({ "points": points }))
                } else {
                    human::boundary_orbit(&points)
                }))
            }
            (None, Some(n), Some(perm)) => {
                let od = odometer(n, &perm)?;
                let x = dyadic("point", &point)?;
                let points = od.orbit(&x, steps).map_err(|e| usage("point", e))?;
                Ok(Outcome::pass(if structured {
                    pretty(&json!({ "N": od.n(), "pi": od.pi(), "points": points }))
                } else {
                    human::orbit(&od, &points)
                }))
            }
            _ => Err(usage(
                "aut",
                "give either --aut, or both --N and --perm (not both forms)",
            )),
        },

        Command::Verify {
            od,
            depth,
            steps,
            seed,
            sample,
            level,
            bound,
        } => {
            let od = odometer(od.n, &od.perm)?;
            let opts = VerifyOptions {
                seed,
                samples: sample,
                steps,
                depth,
                level,
                bound,
            };
            let summary = verify_odometer(&od, &opts).map_err(oracle_usage)?;
            Ok(Outcome {
                passed: summary.passed,
                stdout: if structured {
                    pretty(&summary)
                } else {
                    human::verify(&summary)
                },
            })
        }

        Command::Enumerate {
            n,
            exhaustive,
            sample,
            seed,
        } => {
            let n = check_n(n)?;
            let mode = match (exhaustive, sample) {
                (_, Some(count)) => EnumerationMode::Sample { count, seed },
                (true, None) | (false, None) => EnumerationMode::Exhaustive,
            };
            let table = enumerate_all(n, mode).map_err(|e| match e {
                odometer_core::Error::ExhaustiveRefused(_) => usage("exhaustive", e),
                _ => usage("N", e),
            })?;
            Ok(Outcome::pass(if structured {
                pretty(&table)
            } else {
                human::enumeration(&table)
            }))
        }

        Command::Graft { aut, n } => {
            let n = check_n(n)?;
            let g = automaton(&aut)?;
            let grafted = g.graft(n).map_err(|e| usage("aut", e))?;
            Ok(Outcome::pass(if structured {
                grafted.to_json()
            } else {
                human::automaton(&grafted)
            }))
        }

        Command::Appl {
            aut,
            m,
            perm,
            seed,
            steps,
            depth,
            sample,
        } => {
            let g = match (aut, m, perm) {
                (Some(aut), None, None) => automaton(&aut)?,
                (None, Some(m), Some(perm)) => {
                    if m == 0 || m > 20 {
                        return Err(usage("m", "depth must satisfy 1 <= m <= 20"));
                    }
                    let table = Permutation::parse(&perm, Some(1 << m)).map_err(|e| usage("perm", e))?;
                    TreeAutomorphism::finite_depth_from_table(m, table.images())
                        .map_err(|e| usage("perm", e))?
                }
                _ => return Err(usage("aut", "give either --aut, or --m with --perm")),
            };
            let opts = ApplOptions {
                samples: sample,
                steps,
                depth,
                seed,
                ..ApplOptions::default()
            };
            let result = theorem_appl_pipeline(&g, &opts).map_err(|e| usage("aut", e))?;
            Ok(Outcome {
                passed: result.passed,
                stdout: if structured {
                    pretty(&result)
                } else {
                    human::appl(&result)
                },
            })
        }

        Command::Encode { n, point, side } => {
            let n = check_n(n)?;
            let x = dyadic("point", &point)?;
            let side = match side {
                SideArg::Upper => Side::Upper,
                SideArg::Lower => Side::Lower,
            };
            let encoded = correspondence::encode_point(&x, n, side).map_err(|e| usage("point", e))?;
            Ok(Outcome::pass(if structured {
                pretty(&encoded)
            } else {
                format!(
                    "{}  ({})\n",
                    encoded.point,
                    if encoded.has_interval_preimage {
                        "point of [0,1)"
                    } else {
                        "doubled point, no preimage in [0,1)"
                    }
                )
            }))
        }

        Command::Decode { n, point } => {
            let n = check_n(n)?;
            let b: BoundaryPoint = point.parse().map_err(|e| usage("point", e))?;
            let (value, preimage) = correspondence::decode_point(&b, n).map_err(|e| usage("point", e))?;
            let dyadic = correspondence::decode_dyadic(&b, n).map_err(|e| usage("point", e))?;
            Ok(Outcome::pass(if structured {
                pretty(&json!({
                    "point": b,
                    "value": value.to_string(),
                    "dyadic": dyadic,
                    "has_interval_preimage": preimage,
                }))
            } else {
                human::decoded(&b, &value, dyadic.as_ref(), preimage)
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
