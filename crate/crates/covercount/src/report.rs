//! Search reports: one status per integer in [1, L], rendered as a
//! tab-separated records stream or a human table with summary lines.

use std::fmt::Write as _;

use crate::search::{serialize_witness, Pool};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Achievable,
    CertifiedImpossible,
    Unresolved,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Achievable => "achievable",
            Status::CertifiedImpossible => "certified_impossible",
            Status::Unresolved => "unresolved",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportRow {
    pub value: u64,
    pub status: Status,
    /// Serialized witness term; present exactly for achievable rows.
    pub witness: Option<String>,
}

/// A finished search, flattened for output.
#[derive(Clone, Debug)]
pub struct SearchReport {
    max_alpha: u64,
    atoms_id: String,
    /// Effective certification bound: the atom set's, capped at L.
    bound: u64,
    pool_len: usize,
    rounds: usize,
    rows: Vec<ReportRow>,
}

impl SearchReport {
    pub fn from_pool(pool: &Pool) -> SearchReport {
        let max_alpha = pool.alpha_bound();
        let bound = pool.atom_set().certification_bound().min(max_alpha);
        let rows = (1..=max_alpha)
            .map(|value| match pool.entry_for_alpha(value) {
                Some((_, entry)) => ReportRow {
                    value,
                    status: Status::Achievable,
                    witness: Some(serialize_witness(&entry.witness)),
                },
                None => ReportRow {
                    value,
                    status: if value <= bound {
                        Status::CertifiedImpossible
                    } else {
                        Status::Unresolved
                    },
                    witness: None,
                },
            })
            .collect();
        SearchReport {
            max_alpha,
            atoms_id: pool.atom_set().id().to_string(),
            bound,
            pool_len: pool.len(),
            rounds: pool.rounds(),
            rows,
        }
    }

    pub fn max_alpha(&self) -> u64 {
        self.max_alpha
    }

    pub fn certification_bound(&self) -> u64 {
        self.bound
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    pub fn values_with(&self, status: Status) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.status == status)
            .map(|r| r.value)
            .collect()
    }

    /// Machine format: versioned header, then `value<TAB>status<TAB>term`
    /// with `-` for rows that carry no witness. Deterministic byte-for-byte.
    pub fn render_records(&self) -> String {
        let mut out = format!(
            "#covercount v1 L={} atoms={} T={}\n",
            self.max_alpha, self.atoms_id, self.bound
        );
        for row in &self.rows {
            let term = row.witness.as_deref().unwrap_or("-");
            writeln!(out, "{}\t{}\t{}", row.value, row.status.as_str(), term).unwrap();
        }
        out
    }

    /// Human format: the same rows as an aligned table, then summary lines.
    pub fn render_table(&self) -> String {
        let mut out = format!(
            "search over atoms `{}`, L = {}, certification bound T = {}\n",
            self.atoms_id, self.max_alpha, self.bound
        );
        writeln!(out, "pool: {} pairs in {} rounds\n", self.pool_len, self.rounds).unwrap();
        let vw = self.max_alpha.to_string().len().max("value".len());
        writeln!(out, "{:>vw$}  {:<20}  witness", "value", "status").unwrap();
        for row in &self.rows {
            writeln!(
                out,
                "{:>vw$}  {:<20}  {}",
                row.value,
                row.status.as_str(),
                row.witness.as_deref().unwrap_or("-")
            )
            .unwrap();
        }
        out.push('\n');
        let list = |vals: Vec<u64>| -> String {
            if vals.is_empty() {
                "none".to_string()
            } else {
                vals.iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }
        };
        let achievable = self.values_with(Status::Achievable);
        writeln!(out, "achievable: {} of {}", achievable.len(), self.max_alpha).unwrap();
        writeln!(
            out,
            "certified impossible (T = {}): {}",
            self.bound,
            list(self.values_with(Status::CertifiedImpossible))
        )
        .unwrap();
        writeln!(out, "unresolved: {}", list(self.values_with(Status::Unresolved))).unwrap();
        out
    }
}
