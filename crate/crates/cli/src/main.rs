use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seshadri_core::certificate::{
    auxiliary_derivative_positive, auxiliary_f, check_dichotomy, quadratic_form_semidefinite,
    radical_coincidences, scan_box, DichotomyCertificate,
};
use seshadri_core::curves::{generate_catalog, NegCurveCatalog};
use seshadri_core::lattice::{parse_class_on, DivClass, SurfaceModel};
use seshadri_core::okounkov::{
    nonempty_threshold, okounkov_body, okounkov_function, Flag, ValuationPoint,
};
use seshadri_core::plot::{body_svg, six_point_omega};
use seshadri_core::rational::{format_q, parse_q, Q};
use seshadri_core::seshadri::{mu, seshadri, PointSet, ThresholdResult};
use seshadri_core::shgh::{classify, classify_with_oracle, LinearSystem, DEFAULT_CHARACTERISTIC};
use seshadri_core::zariski::walk_ray;
use seshadri_core::{fixtures, Error};

#[derive(Parser)]
#[command(
    name = "seshadri",
    version,
    about = "Exact Zariski chambers, Okounkov bodies and Seshadri thresholds on blow-ups of the plane"
)]
struct Cli {
    /// Degree bound of the (-1)-curve catalog.
    #[arg(long, global = true, default_value_t = 12)]
    dmax: i64,
    /// Slice spacing for Okounkov functions, a rational "p/q".
    #[arg(long, global = true, default_value = "1/1024")]
    tol: String,
    /// Seed for randomized oracles.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Args)]
struct ClassArgs {
    /// Number of blown-up points; inferred from --class when omitted.
    #[arg(long)]
    s: Option<usize>,
    /// Coefficients "d,c_1,...,c_s" of dH + sum c_i E_i; a trailing "..."
    /// repeats the last coefficient.
    #[arg(long, allow_hyphen_values = true)]
    class: String,
}

#[derive(Subcommand)]
enum Command {
    /// Newton-Okounkov body of a big class.
    Body {
        #[command(flatten)]
        class: ClassArgs,
        /// "general" or "exceptional:I" (zero based).
        #[arg(long, default_value = "general")]
        flag: String,
    },
    /// Okounkov function of the vanishing order at a new point.
    Okfun {
        #[command(flatten)]
        class: ClassArgs,
        /// "general" or "flag".
        #[arg(long, default_value = "general")]
        point: String,
        /// Overlay the six-point bound region in SVG output.
        #[arg(long)]
        omega: bool,
    },
    /// Seshadri constant.
    Seshadri {
        #[command(flatten)]
        class: ClassArgs,
        /// "all", "general" or "index:I".
        #[arg(long, default_value = "all")]
        at: String,
    },
    /// Pseudo-effective threshold.
    Mu {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value = "all")]
        at: String,
    },
    /// Zariski chamber walk along A - tB.
    Walk {
        #[command(flatten)]
        class: ClassArgs,
        /// Direction B; defaults to E_1 + ... + E_s.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
    },
    /// Fat-point linear system classification.
    Shgh {
        #[arg(short = 'd', allow_hyphen_values = true)]
        degree: i64,
        /// Comma separated multiplicities.
        #[arg(short = 'm', allow_hyphen_values = true, default_value = "")]
        mults: String,
        /// Also compute the dimension over a prime field.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_CHARACTERISTIC)]
        characteristic: u64,
    },
    /// Inequality certificate checks.
    Certify {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        delta: String,
        #[arg(long, requires_all = ["big_m", "m"])]
        gamma: Option<u64>,
        #[arg(long = "M", id = "big_m")]
        big_m: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        /// Scan all triples with gamma up to N.
        #[arg(long, conflicts_with = "gamma")]
        scan_box: Option<u64>,
    },
    /// (-1)-curve catalog.
    Catalog {
        #[arg(long)]
        s: usize,
    },
    /// Example corpus with known answers.
    Fixtures {
        /// "all" or a fixture name.
        #[arg(long, default_value = "all")]
        run: String,
    },
}

enum Output {
    Json(Value),
    Svg(String),
    Text(String),
}

struct Usage(String);

enum Failure {
    Usage(Usage),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(Usage(msg.into()))
}

fn class_of(a: &ClassArgs) -> Result<DivClass, Failure> {
    parse_class_on(&a.class, a.s).map_err(|e| usage(format!("--class: {e}")))
}

fn catalog(points: usize, dmax: i64) -> Result<NegCurveCatalog, Failure> {
    Ok(generate_catalog(SurfaceModel::new(points), dmax)?)
}

fn point_set(s: &str) -> Result<PointSet, Failure> {
    match s {
        "all" => Ok(PointSet::AllBlownUp),
        "general" => Ok(PointSet::VeryGeneral),
        _ => s
            .strip_prefix("index:")
            .and_then(|i| i.parse().ok())
            .map(PointSet::Index)
            .ok_or_else(|| usage(format!("--at: expected all, general or index:I, got {s:?}"))),
    }
}

fn flag(s: &str) -> Result<Flag, Failure> {
    match s {
        "general" => Ok(Flag::GeneralLine),
        _ => s
            .strip_prefix("exceptional:")
            .and_then(|i| i.parse().ok())
            .map(Flag::ThroughExceptional)
            .ok_or_else(|| {
                usage(format!(
                    "--flag: expected general or exceptional:I, got {s:?}"
                ))
            }),
    }
}

fn rational(flag: &str, s: &str) -> Result<Q, Failure> {
    parse_q(s).map_err(|e| usage(format!("{flag}: {e}")))
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn threshold_text(r: &ThresholdResult) -> String {
    let curve = r
        .achieved_by
        .as_ref()
        .map(|c| format!(" via {c}"))
        .unwrap_or_default();
    match r.exact() {
        Some(v) => format!("{} = {}{curve}\n", json_name(r), format_q(v)),
        None => format!(
            "{} in [{}, {}]\n",
            json_name(r),
            format_q(&r.lower()),
            r.upper()
        ),
    }
}

fn json_name(r: &ThresholdResult) -> &'static str {
    match r.kind {
        seshadri_core::seshadri::ThresholdKind::Epsilon => "epsilon",
        seshadri_core::seshadri::ThresholdKind::Mu => "mu",
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let fmt = cli.format;
    if fmt == Format::Svg && !matches!(cli.command, Command::Body { .. } | Command::Okfun { .. }) {
        return Err(usage("--format svg is only available for body and okfun"));
    }
    match &cli.command {
        Command::Body { class, flag: f } => {
            let d = class_of(class)?;
            let f = flag(f)?;
            let body = okounkov_body(&d, f, &catalog(d.points(), cli.dmax)?)?;
            Ok(match fmt {
                Format::Json => Output::Json(to_json(&body)),
                Format::Svg => Output::Svg(body_svg(&body.polygon, None, None)),
                Format::Text => Output::Text(
                    body.polygon
                        .vertices()
                        .iter()
                        .map(|(x, y)| format!("{} {}\n", format_q(x), format_q(y)))
                        .collect(),
                ),
            })
        }
        Command::Okfun {
            class,
            point,
            omega,
        } => {
            let d = class_of(class)?;
            let tol = rational("--tol", &cli.tol)?;
            let point = match point.as_str() {
                "general" => ValuationPoint::General,
                "flag" => ValuationPoint::FlagPoint,
                p => {
                    return Err(usage(format!(
                        "--point: expected general or flag, got {p:?}"
                    )))
                }
            };
            let cat = catalog(d.points() + 1, cli.dmax)?;
            let sl = okounkov_function(&d, point, &cat, &tol)?;
            let nonempty = nonempty_threshold(&sl).ok();
            let max_phi = sl.max_vertex_phi();
            Ok(match fmt {
                Format::Json => Output::Json(json!({
                    "class": to_json(&sl.class),
                    "point": to_json(&sl.point),
                    "e_max": to_json(&sl.e_max),
                    "nonempty_threshold": to_json(&nonempty),
                    "max_vertex_phi": to_json(&max_phi),
                    "slices": to_json(&sl),
                })),
                Format::Svg => {
                    let body = &sl.slices.first().ok_or_else(|| usage("no slices"))?.polygon;
                    let overlay = omega.then(six_point_omega);
                    Output::Svg(body_svg(body, Some(&sl), overlay.as_ref()))
                }
                Format::Text => Output::Text(format!(
                    "e_max = {}\nslices = {}\nmax phi at vertices = {}\n",
                    sl.e_max,
                    sl.slices.len(),
                    max_phi.map(|t| t.to_string()).unwrap_or_else(|| "-".into())
                )),
            })
        }
        Command::Seshadri { class, at } | Command::Mu { class, at } => {
            let d = class_of(class)?;
            let at = point_set(at)?;
            let cat = catalog(d.points(), cli.dmax)?;
            let r = if matches!(cli.command, Command::Seshadri { .. }) {
                seshadri(&d, at, &cat)?
            } else {
                mu(&d, at, &cat)?
            };
            Ok(match fmt {
                Format::Text => Output::Text(threshold_text(&r)),
                _ => Output::Json(to_json(&r)),
            })
        }
        Command::Walk { class, direction } => {
            let a = class_of(class)?;
            let b = match direction {
                Some(text) => parse_class_on(text, Some(a.points()))
                    .map_err(|e| usage(format!("--direction: {e}")))?,
                None => SurfaceModel::new(a.points()).exceptional_sum(),
            };
            let w = walk_ray(&a, &b, &catalog(a.points(), cli.dmax)?)?;
            Ok(match fmt {
                Format::Text => {
                    let mut out = String::new();
                    for c in &w.chambers {
                        let names: Vec<String> = c.support.iter().map(|x| x.to_string()).collect();
                        out.push_str(&format!(
                            "[{}, {}] support {{{}}}\n",
                            format_q(&c.start),
                            c.end,
                            names.join(", ")
                        ));
                    }
                    out.push_str(&format!("end {} ({:?})\n", w.end, w.end_reason));
                    Output::Text(out)
                }
                _ => Output::Json(to_json(&w)),
            })
        }
        Command::Shgh {
            degree,
            mults,
            oracle,
            characteristic,
        } => {
            let ms: Vec<i64> = mults
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| usage(format!("-m: not an integer: {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            let l = LinearSystem::new(*degree, ms)?;
            let r = if *oracle {
                classify_with_oracle(&l, *characteristic, cli.seed)?
            } else {
                classify(&l)
            };
            Ok(match fmt {
                Format::Text => Output::Text(format!(
                    "{} vdim {} predicted {} {}{}\n",
                    r.system,
                    r.vdim,
                    r.predicted_dim,
                    if r.special { "special" } else { "non-special" },
                    r.oracle
                        .map(|o| format!(" oracle {}", o.dim))
                        .unwrap_or_default()
                )),
                _ => Output::Json(to_json(&r)),
            })
        }
        Command::Certify {
            s,
            delta,
            gamma,
            big_m,
            m,
            scan_box: scan,
        } => {
            let delta = rational("--delta", delta)?;
            let value = match (gamma, big_m, m, scan) {
                (Some(g), Some(bm), Some(mm), None) => to_json(&check_dichotomy(
                    &DichotomyCertificate::new(*s, delta, *g, *bm, *mm)?,
                )?),
                (None, None, None, Some(n)) => to_json(&scan_box(*s, &delta, *n)?),
                (None, None, None, None) => json!({
                    "s": s,
                    "delta": format_q(&delta),
                    "f": to_json(&auxiliary_f(*s, &delta)?),
                    "f_positive": auxiliary_f(*s, &delta)?.is_positive(),
                    "derivative": to_json(&auxiliary_derivative_positive(*s, &delta)?),
                    "quadratic_form": to_json(&quadratic_form_semidefinite(*s, &delta)?),
                    "rational_radicals": radical_coincidences(*s, &delta)?,
                }),
                _ => {
                    return Err(usage(
                        "give all of --gamma, --M, --m, or --scan-box, or neither",
                    ))
                }
            };
            Ok(match fmt {
                Format::Text => {
                    Output::Text(serde_json::to_string_pretty(&value).expect("json") + "\n")
                }
                _ => Output::Json(value),
            })
        }
        Command::Catalog { s } => {
            let cat = catalog(*s, cli.dmax)?;
            Ok(match fmt {
                Format::Text => {
                    let mut out = format!(
                        "{} curves on {} points up to degree {} (complete: {})\n",
                        cat.len(),
                        cat.points,
                        cat.d_max,
                        cat.complete
                    );
                    for c in cat.entries()? {
                        out.push_str(&format!("{c}\n"));
                    }
                    Output::Text(out)
                }
                _ => Output::Json(to_json(&cat)),
            })
        }
        Command::Fixtures { run } => {
            let all = fixtures::all();
            let chosen: Vec<_> = all
                .iter()
                .filter(|f| run == "all" || f.name == run)
                .collect();
            if chosen.is_empty() {
                return Err(usage(format!("--run: unknown fixture {run:?}")));
            }
            let outcomes: Vec<_> = chosen.into_iter().map(fixtures::run).collect();
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let out = match fmt {
                Format::Text => {
                    let mut t = String::new();
                    for o in &outcomes {
                        t.push_str(&format!(
                            "{:<28} {} {:>7} ms  {}\n",
                            o.name,
                            if o.passed { "pass" } else { "FAIL" },
                            o.millis,
                            o.detail
                        ));
                    }
                    Output::Text(t)
                }
                _ => Output::Json(
                    json!({ "passed": outcomes.len() - failed, "failed": failed, "fixtures": to_json(&outcomes) }),
                ),
            };
            if failed > 0 {
                print_output(out);
                return Err(Failure::Domain(Error::Invalid(format!(
                    "{failed} fixture(s) failed"
                ))));
            }
            Ok(out)
        }
    }
}

fn print_output(out: Output) {
    let text = match out {
        Output::Json(v) => serde_json::to_string_pretty(&v).expect("json") + "\n",
        Output::Svg(s) | Output::Text(s) => s,
    };
    // A closed pipe is not an error worth reporting.
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print_output(out);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
