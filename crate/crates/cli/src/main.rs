use clap::{Arg, ArgAction};
use std::process::ExitCode;
use zlab_cli::{parse_config, parse_flags, run, Command, EXIT_USAGE};

const COMMON: &str = "Common flags:
  --config <path>       JSON config file; flags override its values
  --seed <u64>          base seed (default 0)
  --out <dir>           output directory (beats ZLAB_OUT_DIR and the config)
  --format <csv|json>   table format (default csv)
  --plot                also write an SVG plot

Any other `--some-key value` sets parameter `someKey`; values are read as JSON
when they parse, as plain strings otherwise.";

fn cli() -> clap::Command {
    let mut app = clap::Command::new("zlab")
        .version(zlab_cli::VERSION)
        .about("Numerical experiments for the 2D Zakharov system")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for c in Command::ALL {
        let defaults = serde_json::to_string_pretty(&c.default_params()).expect("defaults serialise");
        app = app.subcommand(
            clap::Command::new(c.name())
                .about(format!("Run the {} experiment", c.name()))
                .after_help(format!("{COMMON}\n\nParameters and defaults:\n{defaults}"))
                .arg(
                    Arg::new("args")
                        .num_args(0..)
                        .trailing_var_arg(true)
                        .allow_hyphen_values(true)
                        .action(ArgAction::Append),
                ),
        );
    }
    app
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let command: Command = name.parse().expect("subcommands come from Command::ALL");
    let tokens: Vec<String> = sub.get_many::<String>("args").map(|v| v.cloned().collect()).unwrap_or_default();
    let cfg = match parse_flags(&tokens).and_then(|o| parse_config(command, o)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("zlab {name}: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let report = run(&cfg);
    for c in &report.manifest.checks {
        println!(
            "{} {} = {:e} (tolerance {:e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        );
    }
    if let Some(e) = &report.manifest.error {
        eprintln!("zlab {name}: {e}");
    }
    println!("manifest: {}", report.manifest_path.display());
    ExitCode::from(report.exit_code as u8)
}
