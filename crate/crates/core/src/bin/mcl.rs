use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mcl_radar::cli::{self, InspectOptions, RunConfig};
use mcl_radar::Error;

#[derive(Parser)]
#[command(name = "mcl", version, about = "Radar pedestrian identification pipeline")]
struct Args {
    /// `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    epochs: Option<usize>,
    #[arg(long, global = true)]
    lr: Option<f64>,
    /// Training window stride in frames.
    #[arg(long, global = true)]
    stride: Option<usize>,
    /// Worker threads; 1 gives bit-reproducible runs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate labelled walker recordings.
    Simulate,
    /// Build spectrograms, features and sample stores.
    Prepare {
        /// Also write every spectrogram as CSV and PGM.
        #[arg(long)]
        export_tds: bool,
    },
    /// Train and keep the best checkpoint.
    Train {
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Score a checkpoint on a prepared split.
    Eval {
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        split: Option<String>,
    },
    /// Print the header of an MDF1, MCL1 or MCS1 file.
    Inspect {
        path: PathBuf,
        #[arg(long)]
        pgm: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn config(args: &Args) -> Result<RunConfig, Error> {
    let mut c = match &args.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = args.seed {
        c.seed = v;
    }
    if let Some(v) = &args.data_dir {
        c.data_dir = v.clone();
    }
    if let Some(v) = &args.out_dir {
        c.out_dir = v.clone();
    }
    if let Some(v) = args.epochs {
        c.epochs = v;
    }
    if let Some(v) = args.lr {
        c.learning_rate = v;
    }
    if let Some(v) = args.stride {
        c.train_stride = v;
    }
    match &args.command {
        Command::Prepare { export_tds: true } => c.export_tds = true,
        Command::Train { checkpoint: Some(p) } => c.checkpoint = Some(p.clone()),
        Command::Eval { checkpoint, split } => {
            if let Some(p) = checkpoint {
                c.checkpoint = Some(p.clone());
            }
            if let Some(s) = split {
                c.eval_split = s.clone();
            }
        }
        _ => {}
    }
    c.validate()?;
    Ok(c)
}

fn run(args: &Args) -> Result<(), Error> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    if let Command::Inspect { path, pgm, csv } = &args.command {
        let opts = InspectOptions {
            pgm: pgm.clone(),
            csv: csv.clone(),
        };
        print!("{}", cli::cmd_inspect(path, &opts)?);
        return Ok(());
    }
    let cfg = config(args)?;
    match &args.command {
        Command::Simulate => {
            let entries = cli::cmd_simulate(&cfg)?;
            println!("file,split,label,frames,seed");
            for e in entries {
                let label = e.label.map(|l| l.to_string()).unwrap_or_default();
                println!("{},{},{label},{},{}", e.file, e.split, e.frames, e.seed);
            }
        }
        Command::Prepare { .. } => {
            let s = cli::cmd_prepare(&cfg)?;
            for (split, recs, samples) in s.splits {
                println!("{split}: {recs} recordings, {samples} samples");
            }
        }
        Command::Train { .. } => {
            let s = cli::cmd_train(&cfg)?;
            println!(
                "best epoch {} of {}: val accuracy {:.4}, final train accuracy {:.4}",
                s.best_epoch, s.epochs_run, s.best_val_accuracy, s.final_train_accuracy
            );
            println!("checkpoint {}", s.checkpoint.display());
        }
        Command::Eval { .. } => {
            let e = cli::cmd_eval(&cfg)?;
            println!("accuracy {:.4} loss {:.4}", e.accuracy, e.loss);
            print!("{}", e.confusion.to_csv());
        }
        Command::Inspect { .. } => unreachable!(),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MCL_LOG", "info")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
