//! Reads a game log, reduces it to a statistic, and writes it back out.
//!
//! cargo run --example game_logs [path/to/log.csv]

use hockey_predictive::ingest::{fixtures, parse_game_log, reduce_to_stat, write_game_log, X2Mode};

fn main() -> hockey_predictive::Result<()> {
    let records = match std::env::args().nth(1) {
        Some(path) => parse_game_log(std::fs::File::open(path)?)?,
        None => fixtures::montreal(),
    };
    let team = records.first().map(|r| r.team.clone()).unwrap_or_default();
    println!("{} games for {team}", records.len());

    // Rescale against the other team in the bundled points table.
    let pts = fixtures::points();
    let own = pts.iter().find(|p| p.team == team).map(|p| p.points);
    let other = pts.iter().find(|p| p.team != team).map(|p| p.points);
    let points = own.zip(other);
    for mode in X2Mode::ALL {
        match reduce_to_stat(&records, &team, 3.0, mode, points) {
            Ok(s) => println!("{mode:<22} x = {:.4}", s.x),
            Err(e) => println!("{mode:<22} {e}"),
        }
    }

    let mut out = Vec::new();
    write_game_log(&records[..records.len().min(3)], &mut out)?;
    print!("\nfirst rows:\n{}", String::from_utf8_lossy(&out));
    Ok(())
}
