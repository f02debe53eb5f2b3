//! Parse a TOML run configuration and execute the `simulate` command into a temporary directory.
//!
//! Run with `cargo run --release --example config_run`.

use mhdwave::io::{execute, parse_config, Command};

const CONFIG: &str = r#"
scheme = "exp_integrator"

[grid]
n = 32
box_length = "4pi"

[physics]
gamma = 0.5

[time]
dt = 0.01
t_end = 1.0
snapshot_every = 10

[initial_data]
family = "gaussian_vortex_pair"
amplitude = 0.5
"#;

fn main() -> mhdwave::Result<()> {
    let mut config = parse_config(CONFIG)?;
    let dir = std::env::temp_dir().join("mhdwave_config_run");
    config.output.directory = dir.to_string_lossy().into_owned();
    println!("config hash {}", config.hash()?);
    for path in execute(&Command::Simulate { resume: None }, &config)? {
        println!("wrote {}", path.display());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
