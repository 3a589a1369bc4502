//! Brute-force check of the verbal dominance claims about the G2 example
//! against the payoffs in the fixture file.

use std::collections::HashMap;

use serde_json::Value;

/// (Rowena, Colin) payoffs by terminal node id of the base tree.
fn terminals(doc: &Value) -> HashMap<String, (i64, i64)> {
    let base = doc["base_tree"].as_str().unwrap();
    let tree = doc["trees"].as_array().unwrap().iter().find(|t| t["id"] == base).unwrap();
    tree["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|n| {
            let pay = n.get("payoffs")?;
            let num = |p: &str| pay[p].as_str().unwrap().parse::<i64>().unwrap();
            Some((n["id"].as_str().unwrap().to_string(), (num("Rowena"), num("Colin"))))
        })
        .collect()
}

/// Every claim with its outcome.
pub fn g2_claims(text: &str) -> Vec<(&'static str, bool)> {
    let doc: Value = serde_json::from_str(text).unwrap();
    let pay = terminals(&doc);
    let r = |k: &str| pay[k].0;
    let c = |k: &str| pay[k].1;
    let all = |it: &mut dyn Iterator<Item = bool>| it.fold(true, |a, b| a && b);

    vec![
        (
            "after n, Rowena's M strictly dominates B and S",
            all(&mut ["B", "S"].iter().map(|y| r(&format!("nM{y}")) > r(&format!("nB{y}")) && r(&format!("nM{y}")) > r(&format!("nS{y}")))),
        ),
        (
            "after t, Rowena's M strictly dominates B and S",
            all(&mut ["B", "S", "M"].iter().map(|y| r(&format!("tM{y}")) > r(&format!("tB{y}")) && r(&format!("tM{y}")) > r(&format!("tS{y}")))),
        ),
        (
            "after t, M is strictly dominant for Colin",
            all(&mut ["B", "S", "M"].iter().map(|x| c(&format!("t{x}M")) > c(&format!("t{x}B")) && c(&format!("t{x}M")) > c(&format!("t{x}S")))),
        ),
        ("in T', B strictly dominates S for Colin", all(&mut ["B", "S"].iter().map(|x| c(&format!("n{x}B")) > c(&format!("n{x}S"))))),
        (
            "in T', B is Rowena's best response to Colin's B",
            r("nBB") > r("nSB"),
        ),
        (
            "Rowena prefers n then M against B to t then M against M",
            r("nMB") > r("tMM"),
        ),
        (
            "without the T' view, Colin prefers S to B against Rowena's M after n",
            c("nMS") > c("nMB"),
        ),
        (
            "Colin's B is not dominated after n once Rowena plays B there",
            c("nBB") > c("nBS"),
        ),
    ]
}
