use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use tropmod_core::moduli::{build_moduli_poset, CellPoset};
use tropmod_core::quadform::{classify_g2, delone_subdivision, g2_equivalent, rat, G2Class};
use tropmod_core::torelli::{jacobian_in_cographic_cone, reproduce_tables, schottky_from_moduli, tropical_jacobian};
use tropmod_core::{
    build_cover_a2, build_cover_a3, enumerate_trivalent, modp_ray_classes, Error, MetricCurve, QuadForm, WeightedGraph,
};

#[derive(Parser)]
#[command(name = "tropmod", version, about = "Cells of tropical moduli spaces and the tropical Torelli map")]
struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trivalent genus-g graphs up to isomorphism.
    Trivalent {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
    },
    /// The cell poset of M_g^tr.
    Moduli {
        #[arg(long)]
        genus: usize,
        #[command(flatten)]
        format: PosetFormat,
    },
    /// The cell poset of the Schottky locus A_g^cogr.
    Schottky {
        #[arg(long)]
        genus: usize,
        #[command(flatten)]
        format: PosetFormat,
    },
    /// Jacobian form of a metric curve given as JSON.
    Jacobian {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Delone subdivision of a definite form.
    Delone {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 3)]
        window: usize,
        #[arg(long)]
        json: bool,
    },
    /// Reduce and classify a binary form.
    Reduce2 {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        json: bool,
    },
    /// The covers FP^3 -> A_2^tr and FP^6 -> A_3^tr.
    Cover {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Maximal and total cell counts.
    Tables {
        #[arg(long, default_value_t = 5)]
        genus_max: usize,
    },
    /// Runs every check up to the given genus.
    VerifyAll {
        #[arg(long, default_value_t = 4)]
        genus_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct PosetFormat {
    #[arg(long, conflicts_with_all = ["json", "dot"])]
    fvector: bool,
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    #[arg(long)]
    dot: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Trivalent { genus, count, json } => {
            let graphs = enumerate_trivalent(genus)?;
            if count {
                println!("{}", graphs.len());
            } else if json {
                let list: Vec<String> = graphs.iter().map(WeightedGraph::to_text).collect();
                println!("{}", json!({ "genus": genus, "count": graphs.len(), "graphs": list }));
            } else {
                for g in &graphs {
                    println!("{g}");
                }
            }
        }
        Command::Moduli { genus, format } => {
            let poset = moduli_poset(genus)?;
            if format.fvector {
                println!("{}", join(&poset.f_vector()));
            } else if format.json {
                println!("{}", poset.to_json());
            } else if format.dot {
                print!("{}", poset.to_dot());
            } else {
                println!(
                    "cells: {}; maximal: {}; fvector: {}",
                    poset.len(),
                    poset.maximal_cells().len(),
                    join(&poset.f_vector())
                );
            }
        }
        Command::Schottky { genus, format } => {
            let poset = schottky_from_moduli(&moduli_poset(genus)?)?;
            if format.fvector {
                println!("{}", join(&poset.f_vector()));
            } else if format.json {
                println!("{}", poset.to_json());
            } else if format.dot {
                print!("{}", poset.to_dot());
            } else {
                println!(
                    "cells: {}; maximal: {}; fvector: {}",
                    poset.len(),
                    poset.maximal_cells().len(),
                    join(&poset.f_vector())
                );
            }
        }
        Command::Jacobian { curve, json } => {
            let text =
                std::fs::read_to_string(&curve).map_err(|e| Error::Parse(format!("{}: {e}", curve.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let curve = MetricCurve::from_json(&value)?;
            let jac = tropical_jacobian(&curve)?;
            let coeffs = jacobian_in_cographic_cone(&curve)?;
            let coeff_text: Vec<String> = coeffs.coefficients.iter().map(ToString::to_string).collect();
            if json {
                println!(
                    "{}",
                    json!({ "genus": curve.genus(), "jacobian": jac.to_json(), "cone_coefficients": coeff_text })
                );
            } else {
                println!("{jac}");
                println!("cone coefficients: {}", coeff_text.join(","));
            }
        }
        Command::Delone { matrix, window, json } => {
            let q: QuadForm = matrix.parse()?;
            let d = delone_subdivision(&q, window)?;
            if json {
                println!("{}", d.to_json());
            } else {
                println!("{} maximal cells per period", d.cells.len());
                for cell in &d.cells {
                    let pts: Vec<String> = cell.iter().map(|p| format!("({})", join(p))).collect();
                    println!("{}", pts.join(" "));
                }
            }
        }
        Command::Reduce2 { matrix, json } => {
            let q: QuadForm = matrix.parse()?;
            let r = classify_g2(&q)?;
            if json {
                println!("{}", r.to_json());
            } else {
                println!("{} {} via {}", r.class, r.reduced, r.transform);
            }
        }
        Command::Cover { genus, verify, json } => {
            let cover = match genus {
                2 => build_cover_a2()?,
                3 => build_cover_a3()?,
                _ => return Err(Error::GenusOutOfRange { genus, min: 2, max: 3 }),
            };
            if json {
                println!("{}", cover.to_json());
            } else {
                if verify {
                    cover.reverify()?;
                }
                println!("{}", cover.summary());
                if !cover.surjective {
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::Tables { genus_max } => {
            print!("{}", reproduce_tables(genus_max)?);
        }
        Command::VerifyAll { genus_max, seed } => {
            let failures = verify_all(genus_max, seed)?;
            return Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Builds `P_g`, reusing `$TROPMOD_CACHE_DIR/moduli_g{g}.json` when present.
fn moduli_poset(genus: usize) -> Result<CellPoset, Error> {
    let Some(dir) = std::env::var_os("TROPMOD_CACHE_DIR") else {
        return build_moduli_poset(genus);
    };
    let path = PathBuf::from(dir).join(format!("moduli_g{genus}.json"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(value) = serde_json::from_str(&text) {
            if let Ok(poset) = CellPoset::from_json(&value) {
                if poset.genus == genus {
                    return Ok(poset);
                }
            }
        }
    }
    let poset = build_moduli_poset(genus)?;
    if std::fs::create_dir_all(path.parent().expect("joined path")).is_ok() {
        let _ = std::fs::write(&path, poset.to_json().to_string());
    }
    Ok(poset)
}

const TRIVALENT: [(usize, usize); 4] = [(2, 2), (3, 5), (4, 17), (5, 71)];
const MODULI_FVECTORS: [(usize, &[usize]); 4] = [
    (2, &[1, 2, 2, 2]),
    (3, &[1, 2, 5, 9, 12, 8, 5]),
    (4, &[1, 3, 7, 21, 43, 75, 89, 81, 42, 17]),
    (5, &[1, 3, 11, 34, 100, 239, 492, 784, 1002, 926, 632, 260, 71]),
];
const SCHOTTKY_FVECTORS: [(usize, &[usize]); 4] = [
    (2, &[1, 1, 1, 1]),
    (3, &[1, 1, 1, 2, 2, 1, 1]),
    (4, &[1, 1, 1, 2, 3, 4, 5, 4, 2, 2]),
    (5, &[1, 1, 1, 2, 3, 5, 9, 12, 15, 17, 15, 7, 4]),
];

struct Report {
    failures: usize,
}

impl Report {
    fn check(&mut self, name: &str, ok: Result<bool, Error>) {
        match ok {
            Ok(true) => println!("PASS {name}"),
            Ok(false) => {
                self.failures += 1;
                println!("FAIL {name}");
            }
            Err(e) => {
                self.failures += 1;
                println!("FAIL {name}: {e}");
            }
        }
    }
}

fn verify_all(genus_max: usize, seed: u64) -> Result<usize, Error> {
    if !(2..=5).contains(&genus_max) {
        return Err(Error::GenusOutOfRange { genus: genus_max, min: 2, max: 5 });
    }
    let mut report = Report { failures: 0 };
    for &(g, count) in TRIVALENT.iter().filter(|(g, _)| *g <= genus_max) {
        report.check(&format!("trivalent g={g}: {count}"), enumerate_trivalent(g).map(|v| v.len() == count));
    }
    for (&(g, moduli), &(_, schottky)) in
        MODULI_FVECTORS.iter().zip(&SCHOTTKY_FVECTORS).filter(|((g, _), _)| *g <= genus_max)
    {
        let poset = moduli_poset(g);
        report.check(
            &format!("moduli g={g}: fvector {}", join(moduli)),
            poset.as_ref().map(|p| p.f_vector() == moduli).map_err(Clone::clone),
        );
        let s = poset.and_then(|p| schottky_from_moduli(&p));
        report.check(&format!("schottky g={g}: fvector {}", join(schottky)), s.map(|p| p.f_vector() == schottky));
    }
    report.check(
        "jacobian of the unit theta curve",
        MetricCurve::new(WeightedGraph::theta(), vec![rat(1); 3])
            .and_then(|c| tropical_jacobian(&c))
            .map(|q| q == QuadForm::from_ints(&[vec![2, -1], vec![-1, 2]]).expect("definite")),
    );
    report.check(&format!("delone agrees with classify_g2 (seed {seed})"), delone_agreement(seed));
    report.check(
        "non-equivalent limits",
        QuadForm::from_ints(&[vec![1, 0], vec![0, 0]]).and_then(|q| g2_equivalent(&q, &QuadForm::zero(2))).map(|e| !e),
    );
    report.check("cover FP^3 -> A_2", build_cover_a2().and_then(|c| Ok(c.reverify()? == 24 && c.surjective)));
    report.check("cover FP^6 -> A_3", build_cover_a3().and_then(|c| Ok(c.reverify()? == 672 && c.surjective)));
    report.check("ray classes", Ok(modp_ray_classes(2, 3)? == 4 && modp_ray_classes(3, 2)? == 7));
    println!("{}", if report.failures == 0 { "OK".to_string() } else { format!("{} checks failed", report.failures) });
    Ok(report.failures)
}

/// Random definite binary forms with entries in [-5, 5]: Delone cell
/// counts match the classification.
fn delone_agreement(seed: u64) -> Result<bool, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tested = 0;
    while tested < 100 {
        let (a, b, c): (i64, i64, i64) = (rng.gen_range(1..=5), rng.gen_range(-5..=5), rng.gen_range(1..=5));
        if a * c <= b * b {
            continue;
        }
        let q = QuadForm::from_ints(&[vec![a, b], vec![b, c]])?;
        let d = delone_subdivision(&q, 3)?;
        let expected = match classify_g2(&q)?.class {
            G2Class::D1Triangulated => d.cells.len() == 2 && d.is_triangulation(),
            G2Class::D2Square => d.cells.len() == 1 && d.cells[0].len() == 4,
            _ => false,
        };
        if !expected {
            return Ok(false);
        }
        tested += 1;
    }
    Ok(true)
}
