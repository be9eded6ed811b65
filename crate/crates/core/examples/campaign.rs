//! A small seeded campaign driven by a JSON config, with the records
//! written as JSON lines.

use ringpir::experiment::{cmd_attack, human_table, write_output, ExperimentConfig};

fn main() -> ringpir::error::Result<()> {
    let mut cfg: ExperimentConfig = serde_json::from_str(
        r#"{ "t": 17, "trials": 20, "seed": 5, "nf_convention": "standard", "t_sweep": [9, 17] }"#,
    )?;
    let path = std::env::temp_dir().join("ringpir-campaign.jsonl");
    cfg.out = Some(path.clone());

    let (records, summary) = cmd_attack(&cfg)?;
    print!("{}", human_table("attack campaign", &summary.rows()));
    write_output(&cfg, &records, &summary.rows())?;
    println!("records: {}", path.display());
    Ok(())
}
