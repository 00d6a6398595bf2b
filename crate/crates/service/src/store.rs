//! Session persistence: a JSON descriptor and an append-only move log per
//! session, in the plain move-log format.

use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use linkgame::{parse_move_log, render_move_log, render_pd, GameConfig, Move, MoveLog, ShadowDiagram, ShadowSource};
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;
use crate::session::SessionMeta;

pub struct Store {
    dir: PathBuf,
}

pub struct Persisted {
    pub meta: SessionMeta,
    pub config: GameConfig,
    pub moves: Vec<Move>,
}

#[derive(Serialize, Deserialize)]
struct MetaFile {
    meta: SessionMeta,
    budget: usize,
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> ServiceError + '_ {
    move |source| ServiceError::Io { path: path.to_path_buf(), source }
}

fn corrupt(path: &Path, message: impl ToString) -> ServiceError {
    ServiceError::Corrupt { path: path.to_path_buf(), message: message.to_string() }
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, ServiceError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io(&dir))?;
        Ok(Store { dir })
    }

    fn path(&self, id: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{id}.{ext}"))
    }

    /// Writes the descriptor and the log header; word sources are logged as
    /// words, everything else as a PD file next to the log.
    pub fn create(&self, meta: &SessionMeta, config: &GameConfig, word: Option<ShadowSource>) -> Result<(), ServiceError> {
        let id = &meta.id;
        let source = match word {
            Some(s) => s,
            None => {
                let pd = self.path(id, "pd");
                fs::write(&pd, render_pd(&config.shadow)).map_err(io(&pd))?;
                ShadowSource::Pd(format!("{id}.pd"))
            }
        };
        let log = MoveLog { source: Some(source), first: Some(config.first_mover), moves: Vec::new() };
        let path = self.path(id, "log");
        fs::write(&path, format!("# session {id}\n{}", render_move_log(&log))).map_err(io(&path))?;
        let json = self.path(id, "json");
        let file = MetaFile { meta: meta.clone(), budget: config.budget };
        let text = serde_json::to_string_pretty(&file).map_err(|e| corrupt(&json, e))?;
        fs::write(&json, text).map_err(io(&json))
    }

    pub fn append(&self, id: &str, moves: &[Move]) -> Result<(), ServiceError> {
        let path = self.path(id, "log");
        let mut f = OpenOptions::new().append(true).open(&path).map_err(io(&path))?;
        let text: String = moves.iter().map(|m| format!("{m}\n")).collect();
        f.write_all(text.as_bytes()).map_err(io(&path))?;
        f.sync_data().map_err(io(&path))
    }

    pub fn remove(&self, id: &str) {
        for ext in ["json", "log", "pd"] {
            let _ = fs::remove_file(self.path(id, ext));
        }
    }

    pub fn load_all(&self) -> Result<Vec<Persisted>, ServiceError> {
        let mut out = Vec::new();
        let mut entries: Vec<PathBuf> = fs::read_dir(&self.dir)
            .map_err(io(&self.dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        entries.sort();
        for json in entries {
            let text = fs::read_to_string(&json).map_err(io(&json))?;
            let file: MetaFile = serde_json::from_str(&text).map_err(|e| corrupt(&json, e))?;
            let log_path = self.path(&file.meta.id, "log");
            let text = fs::read_to_string(&log_path).map_err(io(&log_path))?;
            let log = parse_move_log(&text).map_err(|e| corrupt(&log_path, e))?;
            let source = log.source.ok_or_else(|| corrupt(&log_path, "no shadow line"))?;
            let shadow: ShadowDiagram = source.load(&self.dir).map_err(|e| corrupt(&log_path, e))?;
            let first = log.first.ok_or_else(|| corrupt(&log_path, "no first line"))?;
            let config = GameConfig { shadow, first_mover: first, budget: file.budget };
            out.push(Persisted { meta: file.meta, config, moves: log.moves });
        }
        Ok(out)
    }
}
