//! Running a JSON scenario through the same path as `curvbar run`.

use curvbar::scenario::{domain_cap, execute, ScenarioConfig};

const CONFIG: &str = r#"{
  "run": { "threshold": { "kind": "mean", "manifold": "space_form:-1:2", "r": 1.0 } }
}"#;

fn main() -> curvbar::Result<()> {
    let cfg = ScenarioConfig::from_json(CONFIG)?;
    let cap = cfg.t_max.map_or_else(domain_cap, Ok)?;
    let out = execute(&cfg.run, cap)?;
    print!("{}", out.stdout);
    println!("exit status {}", out.status.exit_code());
    Ok(())
}
