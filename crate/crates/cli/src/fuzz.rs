use std::path::Path;

use serde_json::{json, Value};

use unaware_core::testkit::{fuzz, GeneratorConfig};

use crate::{json_line, read, Failure};

/// Without a config file, player and tree counts cycle with the seed.
fn regime(seed: u64) -> GeneratorConfig {
    GeneratorConfig { seed, players: 2 + (seed % 2) as usize, trees: 1 + (seed % 3) as usize, ..GeneratorConfig::default() }
}

pub fn run(games: u64, seed: u64, config: Option<&Path>) -> Result<String, Failure> {
    let base: Option<GeneratorConfig> = match config {
        Some(path) => {
            let cfg: GeneratorConfig = serde_json::from_str(&read(path)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            cfg.check().map_err(|e| Failure::Usage(e.to_string()))?;
            Some(cfg)
        }
        None => None,
    };
    let seeds: Vec<u64> = (0..games).map(|i| seed.wrapping_add(i)).collect();
    let configs: Vec<GeneratorConfig> = seeds
        .iter()
        .map(|&s| match &base {
            Some(b) => GeneratorConfig { seed: s, ..b.clone() },
            None => regime(s),
        })
        .collect();
    let results = fuzz(&configs);

    let mut reports = Vec::new();
    let mut skipped = 0;
    let mut rising = 0;
    let mut failing_rising = 0;
    let mut failing_games = 0;
    let mut by_check: Vec<(String, Vec<u64>)> = Vec::new();
    for (cfg, result) in configs.iter().zip(&results) {
        match result {
            Ok(r) => {
                rising += r.awareness_rises as usize;
                if !r.passed() {
                    failing_games += 1;
                    failing_rising += r.awareness_rises as usize;
                }
                for c in r.checks.iter().chain(&r.informational) {
                    match by_check.iter_mut().find(|(n, _)| n == c.name) {
                        Some((_, v)) if !c.passed => v.push(cfg.seed),
                        Some(_) => {}
                        None => by_check.push((c.name.to_string(), if c.passed { vec![] } else { vec![cfg.seed] })),
                    }
                }
                reports.push(serde_json::to_value(r).expect("report serializes"));
            }
            Err(e) => {
                skipped += 1;
                reports.push(json!({ "config": cfg, "error": e.to_string() }));
            }
        }
    }

    let generated = games as usize - skipped;
    eprintln!("fuzz: {generated} games from seed {seed}, {skipped} not generated");
    for (name, seeds) in &by_check {
        let shown: Vec<String> = seeds.iter().take(10).map(u64::to_string).collect();
        let more = if seeds.len() > 10 { ", ..." } else { "" };
        eprintln!("  {name}: {} failing{}", seeds.len(), if seeds.is_empty() { String::new() } else { format!(" (seeds {}{more})", shown.join(", ")) });
    }
    eprintln!("  awareness rises in {rising} games; {failing_rising} of {failing_games} failing games have it");

    let summary: Vec<Value> = by_check.iter().map(|(n, s)| json!({ "check": n, "failing_seeds": s })).collect();
    Ok(json_line(&json!({
        "schema": 1,
        "seed": seed,
        "games": games,
        "skipped": skipped,
        "awareness_rises": rising,
        "failing_games": failing_games,
        "failing_with_rising_awareness": failing_rising,
        "checks": summary,
        "reports": reports,
    })))
}
