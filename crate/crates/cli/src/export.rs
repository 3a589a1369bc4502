use std::fs;
use std::path::Path;

use serde_json::json;

use unaware_core::{format_rational, Game, NormalForm, PlayerId, TreeId};

use crate::{json_line, Failure};

const ROWS: PlayerId = PlayerId(0);

/// Rows are the first player's strategies, columns the other players' profiles.
fn table_csv(nf: &NormalForm, t: TreeId) -> String {
    let game = nf.game();
    let u = &nf.universe;
    let table = nf.table(t);
    let column = |o: usize| -> String {
        let profile = table.opponent_profile(ROWS, 0, o);
        game.player_ids()
            .filter(|&q| q != ROWS)
            .map(|q| u.render(u.strategy(q, t, profile[q.0])))
            .collect::<Vec<_>>()
            .join("/")
    };
    let others: Vec<&str> = game.players.iter().skip(1).map(String::as_str).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![format!("{} \\ {}", game.players[0], others.join("/"))];
    header.extend((0..table.opponent_count(ROWS)).map(column));
    w.write_record(&header).expect("in-memory write");
    for own in 0..table.counts[ROWS.0] {
        let mut row = vec![u.render(u.strategy(ROWS, t, own))];
        for o in 0..table.opponent_count(ROWS) {
            let index = table.join(ROWS, own, o);
            let cell: Vec<String> = game.player_ids().map(|p| format_rational(nf.payoff(t, p, index))).collect();
            row.push(format!("({})", cell.join(", ")));
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 labels")
}

fn infosets_json(nf: &NormalForm, t: TreeId) -> String {
    let game = nf.game();
    let u = &nf.universe;
    let table = nf.table(t);
    let mut sets = Vec::new();
    for p in game.player_ids() {
        for x in nf.nf_infosets[p.0].iter().filter(|x| x.tree == t) {
            let own: Vec<String> =
                (0..x.own.len()).filter(|&i| x.own[i]).map(|i| u.render(u.strategy(p, t, i))).collect();
            let opponents: Vec<String> = (0..x.opponents.len())
                .filter(|&o| x.opponents[o])
                .map(|o| {
                    let profile = table.opponent_profile(p, 0, o);
                    game.player_ids()
                        .filter(|&q| q != p)
                        .map(|q| u.render(u.strategy(q, t, profile[q.0])))
                        .collect::<Vec<_>>()
                        .join("/")
                })
                .collect();
            sets.push(json!({
                "player": game.players[p.0],
                "sources": x.sources.iter().map(|&h| game.infoset_label(h)).collect::<Vec<_>>(),
                "strategies": own,
                "opponents": opponents,
            }));
        }
    }
    json_line(&json!({ "schema": 1, "tree": game.tree(t).name, "infosets": sets }))
}

pub fn run(game: &Game, out: Option<&Path>) -> Result<String, Failure> {
    let nf = NormalForm::build(game);
    let mut stdout = String::new();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    for t in game.tree_ids() {
        let name = &game.tree(t).name;
        let files = [(format!("{name}.csv"), table_csv(&nf, t)), (format!("{name}.infosets.json"), infosets_json(&nf, t))];
        for (file, body) in files {
            match out {
                Some(dir) => {
                    let path = dir.join(&file);
                    fs::write(&path, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                    stdout.push_str(&format!("wrote {}\n", path.display()));
                }
                None => {
                    stdout.push_str(&format!("# {file}\n"));
                    stdout.push_str(&body);
                }
            }
        }
    }
    Ok(stdout)
}
