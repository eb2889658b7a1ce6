//! Walking a git repository's history through the `git` command.

use std::path::{Path, PathBuf};
use std::process::Command;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepoError {
    #[error("cannot run git: {0}")]
    Spawn(std::io::Error),
    #[error("git {args} failed in {repo}: {stderr}")]
    Git {
        repo: PathBuf,
        args: String,
        stderr: String,
    },
}

/// Before and after contents of one changed source file. Paths are
/// repository-relative; a side is `None` when the file was added or removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilePair {
    pub before_path: Option<String>,
    pub after_path: Option<String>,
    pub before: Option<String>,
    pub after: Option<String>,
}

impl FilePair {
    pub fn path(&self) -> &str {
        self.after_path
            .as_deref()
            .or(self.before_path.as_deref())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitChange {
    pub commit: String,
    /// First parent; `None` for a root commit.
    pub parent: Option<String>,
    pub files: Vec<FilePair>,
}

pub struct Repo {
    root: PathBuf,
}

fn is_source(path: &str) -> bool {
    path.ends_with(".java")
}

impl Repo {
    pub fn open(root: &Path) -> Result<Repo, RepoError> {
        let repo = Repo {
            root: root.to_path_buf(),
        };
        repo.git(&["rev-parse", "--git-dir"])?;
        Ok(repo)
    }

    fn git_bytes(&self, args: &[&str]) -> Result<Vec<u8>, RepoError> {
        let out = Command::new("git")
            .arg("-C")
            .arg(&self.root)
            .args(args)
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .output()
            .map_err(RepoError::Spawn)?;
        if !out.status.success() {
            return Err(RepoError::Git {
                repo: self.root.clone(),
                args: args.join(" "),
                stderr: String::from_utf8_lossy(&out.stderr).trim().to_string(),
            });
        }
        Ok(out.stdout)
    }

    fn git(&self, args: &[&str]) -> Result<String, RepoError> {
        self.git_bytes(args)
            .map(|b| String::from_utf8_lossy(&b).into_owned())
    }

    /// Commits in `range` (default: everything reachable from HEAD), oldest
    /// first.
    pub fn commits(&self, range: Option<&str>) -> Result<Vec<String>, RepoError> {
        let out = self.git(&[
            "rev-list",
            "--reverse",
            "--topo-order",
            range.unwrap_or("HEAD"),
        ])?;
        Ok(out.lines().map(str::to_string).collect())
    }

    pub fn first_parent(&self, commit: &str) -> Result<Option<String>, RepoError> {
        let out = self.git(&["rev-list", "--parents", "-n", "1", commit])?;
        Ok(out.split_whitespace().nth(1).map(str::to_string))
    }

    pub fn show(&self, commit: &str, path: &str) -> Result<String, RepoError> {
        let bytes = self.git_bytes(&["cat-file", "blob", &format!("{commit}:{path}")])?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    /// Source files present in `commit`, sorted.
    pub fn source_files(&self, commit: &str) -> Result<Vec<String>, RepoError> {
        let out = self.git_bytes(&["ls-tree", "-r", "-z", "--name-only", commit])?;
        let mut files: Vec<String> = out
            .split(|&b| b == 0)
            .filter(|s| !s.is_empty())
            .map(|s| String::from_utf8_lossy(s).into_owned())
            .filter(|p| is_source(p))
            .collect();
        files.sort();
        Ok(files)
    }

    /// Changed source files of `commit` against its first parent, with
    /// renamed files paired up.
    pub fn change(&self, commit: &str) -> Result<CommitChange, RepoError> {
        let parent = self.first_parent(commit)?;
        let raw = match &parent {
            Some(p) => self.git_bytes(&[
                "diff-tree",
                "-r",
                "-z",
                "-M",
                "--name-status",
                "--no-commit-id",
                p,
                commit,
            ])?,
            None => self.git_bytes(&[
                "diff-tree",
                "-r",
                "-z",
                "--root",
                "--name-status",
                "--no-commit-id",
                commit,
            ])?,
        };
        let fields: Vec<String> = raw
            .split(|&b| b == 0)
            .filter(|s| !s.is_empty())
            .map(|s| String::from_utf8_lossy(s).into_owned())
            .collect();
        let mut files = Vec::new();
        let mut i = 0;
        while i < fields.len() {
            let status = fields[i].chars().next().unwrap_or('M');
            let arity = if matches!(status, 'R' | 'C') { 2 } else { 1 };
            let paths = &fields[(i + 1).min(fields.len())..(i + 1 + arity).min(fields.len())];
            i += 1 + arity;
            let (before_path, after_path) = match (status, paths) {
                ('R', [old, new]) => (Some(old.clone()), Some(new.clone())),
                ('C', [_, new]) | ('A', [new]) => (None, Some(new.clone())),
                ('D', [old]) => (Some(old.clone()), None),
                (_, [path]) => (Some(path.clone()), Some(path.clone())),
                _ => continue,
            };
            let relevant = before_path.as_deref().is_some_and(is_source)
                || after_path.as_deref().is_some_and(is_source);
            if !relevant {
                continue;
            }
            let before = match (&parent, &before_path) {
                (Some(p), Some(path)) => Some(self.show(p, path)?),
                _ => None,
            };
            let after = match &after_path {
                Some(path) => Some(self.show(commit, path)?),
                None => None,
            };
            files.push(FilePair {
                before_path,
                after_path,
                before,
                after,
            });
        }
        files.sort_by(|a, b| a.path().cmp(b.path()));
        Ok(CommitChange {
            commit: commit.to_string(),
            parent,
            files,
        })
    }

    pub fn walk(&self, range: Option<&str>) -> Result<Vec<CommitChange>, RepoError> {
        self.commits(range)?
            .iter()
            .map(|c| self.change(c))
            .collect()
    }
}
