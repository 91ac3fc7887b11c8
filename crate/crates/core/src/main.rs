use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use folidx::arith::{cotangent_pair_sum, format_rational};
use folidx::catalog::{
    builtin_names, builtin_source, catalog_from_env, verify_documents, VerifyOptions,
};
use folidx::cohomology::basic_euler_oracle;
use folidx::document::{canonicalize, load_example};
use folidx::eta::{
    blowup_defect_check, eta_lens_signature, transverse_signature, transverse_signature_original,
};
use folidx::strata::{gauss_bonnet, rep_valued_gauss_bonnet};
use folidx::{CyclicGroup, Error, LensDatum};

const EXIT_INPUT: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "folidx",
    version,
    about = "Basic Euler characteristics and lens-space eta invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basic Euler characteristic of an example by stratified assembly and oracle.
    Euler { file: PathBuf },
    /// Representation-valued Euler characteristic for the character rho_j.
    EulerRep {
        file: PathBuf,
        #[arg(long)]
        rho: i64,
    },
    /// Eta invariant of the lens-space boundary signature operator.
    EtaLens {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        /// Also print the direct floating-point cotangent sum.
        #[arg(long)]
        float: bool,
    },
    /// Transverse signature of a document's signature block.
    Signature { file: PathBuf },
    /// Verify every catalog example against its expected values.
    VerifyCatalog {
        /// Emit the report as canonical JSON.
        #[arg(long)]
        json: bool,
        /// Skip the independent oracle channels.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Print a built-in example as canonical JSON.
    PrintExample { name: String },
}

enum Outcome {
    Ok,
    Mismatch,
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Euler { file } => {
            let doc = load_example(&file)?;
            let example = doc
                .foliation()
                .ok_or_else(|| Error::Validation(format!("{} has no strata", doc.name)))?;
            let assembled = gauss_bonnet(&example)?;
            println!("example:   {}", doc.name);
            println!("assembled: {assembled}");
            let mut ok = true;
            if let Some(oracle) = &doc.oracle {
                let betti = oracle.basic_betti()?;
                let chi = basic_euler_oracle(&betti);
                println!("oracle:    {chi} from betti {betti}");
                ok &= chi == assembled;
            }
            if let Some(e) = &doc.expected.euler {
                println!("expected:  {} ({})", e.value, e.citation);
                ok &= e.value == assembled;
            }
            Ok(if ok { Outcome::Ok } else { Outcome::Mismatch })
        }
        Command::EulerRep { file, rho } => {
            let doc = load_example(&file)?;
            let example = doc
                .foliation()
                .ok_or_else(|| Error::Validation(format!("{} has no strata", doc.name)))?;
            let group = match (&doc.rho_table, &doc.oracle) {
                (Some(t), _) => t.group_order,
                (None, Some(folidx::OracleModel::Suspension { group_order, .. })) => *group_order,
                _ => CyclicGroup::trivial(),
            };
            if rho < 0 || rho as u64 >= group.order() {
                return Err(Error::Validation(format!(
                    "character index {rho} out of range for Z/{}",
                    group.order()
                )));
            }
            let chi = group.character(rho);
            let assembled = rep_valued_gauss_bonnet(&example, &chi)?;
            println!("example:   {}", doc.name);
            println!("character: rho_{} of Z/{}", chi.index(), group.order());
            println!("assembled: {assembled}");
            let mut ok = true;
            if let Some(oracle) = &doc.oracle {
                if let Some(betti) = oracle.isotypic_betti(&chi)? {
                    let v = basic_euler_oracle(&betti);
                    println!("oracle:    {v} from isotypic betti {betti}");
                    ok &= v == assembled;
                }
            }
            if let Some(e) = doc.expected.rho.iter().find(|e| e.index == chi.index()) {
                println!("expected:  {} ({})", e.value, e.citation);
                ok &= e.value == assembled;
            }
            Ok(if ok { Outcome::Ok } else { Outcome::Mismatch })
        }
        Command::EtaLens { p, m, n, float } => {
            let datum = LensDatum::new(p, m, n)?;
            let eta = eta_lens_signature(&datum);
            let sum = cotangent_pair_sum(&datum);
            println!("lens space:       {datum}");
            println!("cotangent sum:    {}", format_rational(&sum.exact));
            println!("eta(B):           {}", format_rational(&eta.eta));
            println!("eta(2B):          {}", format_rational(&eta.doubled));
            println!("h(2B):            {}", eta.kernel_dim);
            if float {
                println!("cotangent float:  {:.15}", sum.float);
                println!("|exact - float|:  {:.3e}", sum.discrepancy());
            }
            Ok(Outcome::Ok)
        }
        Command::Signature { file } => {
            let doc = load_example(&file)?;
            let problem = doc.signature_problem().ok_or_else(|| {
                Error::Validation(format!("{} has no signature block", doc.name))
            })??;
            let sig = transverse_signature(&problem)?;
            println!("example:   {}", doc.name);
            println!("signature: {}", format_rational(&sig.value));
            if !sig.integral {
                println!("warning:   signature is not an integer");
            }
            let mut ok = true;
            if problem.p1_integral_original.is_some() {
                let orig = transverse_signature_original(&problem)?;
                let defect = blowup_defect_check(&problem)?;
                println!("original:  {}", format_rational(&orig.value));
                println!("defect check (p1 difference / 3 == N): {defect}");
                ok &= defect && orig.value == sig.value;
            }
            if let Some(e) = &doc.expected.signature {
                println!("expected:  {} ({})", format_rational(&e.value), e.citation);
                ok &= e.value == sig.value;
            }
            Ok(if ok { Outcome::Ok } else { Outcome::Mismatch })
        }
        Command::VerifyCatalog { json, no_oracle } => {
            let docs = catalog_from_env()?;
            let report = verify_documents(&docs, VerifyOptions { oracle: !no_oracle });
            if json {
                println!("{}", report.to_canonical_json());
            } else {
                print!("{}", report.render_table());
            }
            Ok(if report.all_passed() {
                Outcome::Ok
            } else {
                Outcome::Mismatch
            })
        }
        Command::PrintExample { name } => {
            let src = builtin_source(&name).ok_or_else(|| {
                let known: Vec<_> = builtin_names().collect();
                Error::Validation(format!(
                    "unknown example {name:?}; known: {}",
                    known.join(", ")
                ))
            })?;
            println!("{}", canonicalize(src)?);
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(EXIT_MISMATCH),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
