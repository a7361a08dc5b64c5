//! Game logs and season points, and their reduction to a [`SufficientStat`].
//!
//! A game log is comma-separated text with the header
//! `team,opponent,elapsed_minutes[,goal_index]`. A points file has the header
//! `team,points`.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::predictive::SufficientStat;
use crate::{Error, Result};

const LOG_HEADER: [&str; 4] = ["team", "opponent", "elapsed_minutes", "goal_index"];
const POINTS_HEADER: [&str; 2] = ["team", "points"];
const DEFAULT_GOAL_INDEX: u32 = 3;

/// Minutes until `team` scored its `goal_index`-th goal against `opponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub team: String,
    pub opponent: String,
    pub elapsed_minutes: f64,
    pub goal_index: u32,
}

impl GameRecord {
    pub fn new(team: &str, opponent: &str, elapsed_minutes: f64, goal_index: u32) -> Result<Self> {
        let r = Self {
            team: team.to_string(),
            opponent: opponent.to_string(),
            elapsed_minutes,
            goal_index,
        };
        r.validate().map_err(|detail| Error::Parse { line: 0, detail })?;
        Ok(r)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.team.is_empty() || self.opponent.is_empty() {
            return Err("team and opponent must be non-empty".into());
        }
        if self.team == self.opponent {
            return Err(format!("team and opponent are both {:?}", self.team));
        }
        if !(self.elapsed_minutes > 0.0 && self.elapsed_minutes <= 60.0) {
            return Err(format!(
                "elapsed_minutes must lie in (0, 60], got {}",
                self.elapsed_minutes
            ));
        }
        if self.goal_index < 1 {
            return Err("goal_index must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeasonPoints {
    pub team: String,
    pub points: u32,
}

fn reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(source)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Parse {
            line,
            detail: format!("{kind:?}"),
        },
    }
}

fn check_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str], optional_tail: usize) -> Result<usize> {
    let header = rdr.headers().map_err(csv_error)?.clone();
    let got: Vec<&str> = header.iter().collect();
    let min = expected.len() - optional_tail;
    if got.len() < min || got.len() > expected.len() || got[..] != expected[..got.len()] {
        return Err(Error::Parse {
            line: 1,
            detail: format!("expected header {:?}, got {:?}", expected.join(","), got.join(",")),
        });
    }
    Ok(got.len())
}

/// Parse a game log, validating every row.
pub fn parse_game_log<R: Read>(source: R) -> Result<Vec<GameRecord>> {
    let mut rdr = reader(source);
    let columns = check_header(&mut rdr, &LOG_HEADER, 1)?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |detail: String| Error::Parse { line, detail };
        let elapsed: f64 = row[2]
            .parse()
            .map_err(|_| bad(format!("elapsed_minutes {:?} is not a number", &row[2])))?;
        let goal_index = if columns == 4 {
            row[3]
                .parse()
                .map_err(|_| bad(format!("goal_index {:?} is not a positive integer", &row[3])))?
        } else {
            DEFAULT_GOAL_INDEX
        };
        let record = GameRecord {
            team: row[0].to_string(),
            opponent: row[1].to_string(),
            elapsed_minutes: elapsed,
            goal_index,
        };
        record.validate().map_err(bad)?;
        out.push(record);
    }
    Ok(out)
}

/// Write records in the four-column game-log format.
pub fn write_game_log<W: Write>(records: &[GameRecord], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(LOG_HEADER).map_err(csv_error)?;
    for r in records {
        w.write_record([
            r.team.as_str(),
            r.opponent.as_str(),
            &r.elapsed_minutes.to_string(),
            &r.goal_index.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_points<R: Read>(source: R) -> Result<Vec<SeasonPoints>> {
    let mut rdr = reader(source);
    check_header(&mut rdr, &POINTS_HEADER, 0)?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let points: u32 = row[1].parse().map_err(|_| Error::Parse {
            line,
            detail: format!("points {:?} is not a non-negative integer", &row[1]),
        })?;
        if points == 0 {
            return Err(Error::Parse {
                line,
                detail: "points must be > 0".into(),
            });
        }
        out.push(SeasonPoints {
            team: row[0].to_string(),
            points,
        });
    }
    Ok(out)
}

pub fn points_for(table: &[SeasonPoints], team: &str) -> Result<u32> {
    table
        .iter()
        .find(|p| p.team == team)
        .map(|p| p.points)
        .ok_or_else(|| Error::Config(format!("no season points for {team:?}")))
}

/// How a team's mean waiting time is rescaled before use as a statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum X2Mode {
    /// The mean itself.
    #[default]
    Raw,
    /// The mean times `R_opponent / R_team`.
    PointsRatio,
    /// The mean times `(R_opponent / R_team)²`.
    PointsRatioSquared,
}

impl X2Mode {
    pub const ALL: [X2Mode; 3] = [X2Mode::Raw, X2Mode::PointsRatio, X2Mode::PointsRatioSquared];

    pub fn as_str(&self) -> &'static str {
        match self {
            X2Mode::Raw => "raw",
            X2Mode::PointsRatio => "points-ratio",
            X2Mode::PointsRatioSquared => "points-ratio-squared",
        }
    }

    /// Multiplier applied to the mean given `(R_team, R_opponent)`.
    pub fn factor(&self, points: Option<(u32, u32)>) -> Result<f64> {
        if *self == X2Mode::Raw {
            return Ok(1.0);
        }
        let (team, opp) = points.ok_or_else(|| {
            Error::Config(format!("x2 mode {} needs season points for both teams", self.as_str()))
        })?;
        if team == 0 || opp == 0 {
            return Err(Error::Config("season points must be > 0".into()));
        }
        let ratio = opp as f64 / team as f64;
        Ok(match self {
            X2Mode::PointsRatio => ratio,
            _ => ratio * ratio,
        })
    }
}

impl fmt::Display for X2Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for X2Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        X2Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown x2 mode {s:?}; expected raw, points-ratio or points-ratio-squared")))
    }
}

/// Mean waiting time of `team`'s games, rescaled by `mode`, as a statistic with shape `r`.
pub fn reduce_to_stat(
    records: &[GameRecord],
    team: &str,
    r: f64,
    mode: X2Mode,
    points: Option<(u32, u32)>,
) -> Result<SufficientStat> {
    let times: Vec<f64> = records
        .iter()
        .filter(|g| g.team == team)
        .map(|g| g.elapsed_minutes)
        .collect();
    if times.is_empty() {
        return Err(Error::EmptySelection(team.to_string()));
    }
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    SufficientStat::new(mean * mode.factor(points)?, r)
}

/// The 2017–18 Toronto and Montreal logs and season points, built into the crate.
pub mod fixtures {
    use super::*;

    pub const TORONTO: &str = "Toronto Maple Leafs";
    pub const MONTREAL: &str = "Montreal Canadiens";

    pub const TORONTO_2017_18: &str = include_str!("../data/toronto_2017_18.csv");
    pub const MONTREAL_2017_18: &str = include_str!("../data/montreal_2017_18.csv");
    pub const POINTS_2017_18: &str = include_str!("../data/points_2017_18.csv");

    pub fn toronto() -> Vec<GameRecord> {
        parse_game_log(TORONTO_2017_18.as_bytes()).expect("bundled fixture parses")
    }

    pub fn montreal() -> Vec<GameRecord> {
        parse_game_log(MONTREAL_2017_18.as_bytes()).expect("bundled fixture parses")
    }

    pub fn points() -> Vec<SeasonPoints> {
        parse_points(POINTS_2017_18.as_bytes()).expect("bundled fixture parses")
    }

    /// Toronto's statistic with shape 3.
    pub fn toronto_stat() -> SufficientStat {
        reduce_to_stat(&toronto(), TORONTO, 3.0, X2Mode::Raw, None).expect("fixture is non-empty")
    }

    /// Montreal's statistic with shape 3 under `mode`, scaled by `R_Toronto / R_Montreal`.
    pub fn montreal_stat(mode: X2Mode) -> SufficientStat {
        let pts = points();
        let p = (
            points_for(&pts, MONTREAL).expect("fixture lists Montreal"),
            points_for(&pts, TORONTO).expect("fixture lists Toronto"),
        );
        reduce_to_stat(&montreal(), MONTREAL, 3.0, mode, Some(p)).expect("fixture is non-empty")
    }
}
