use std::fmt;
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Machine,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Inputs that reproduce a failure, on one line.
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into(), witness: None }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Skipped, detail: detail.into(), witness: None }
    }

    /// Attaches the witness only when the check failed.
    pub fn witness(mut self, w: impl FnOnce() -> String) -> Self {
        if self.status == Status::Fail {
            self.witness = Some(w());
        }
        self
    }

    pub fn failed(name: impl Into<String>, detail: impl Into<String>, witness: String) -> Self {
        Check { name: name.into(), status: Status::Fail, detail: detail.into(), witness: Some(witness) }
    }
}

/// Checks plus free-form notes (solved ledgers and the like) for one suite or command.
#[derive(Clone, Debug, Default)]
pub struct Section {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section { title: title.into(), ..Default::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.extend(text.into().lines().map(str::to_string));
    }
}

pub struct RunReport {
    pub command: String,
    pub sections: Vec<Section>,
}

impl RunReport {
    pub fn count(&self, s: Status) -> usize {
        self.sections.iter().flat_map(|x| &x.checks).filter(|c| c.status == s).count()
    }

    pub fn all_pass(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn write(&self, out: &mut impl Write, format: Format) -> std::io::Result<()> {
        if format != Format::Machine {
            writeln!(out, "$ {}", self.command)?;
            for s in &self.sections {
                writeln!(out, "== {}", s.title)?;
                for c in &s.checks {
                    writeln!(out, "{:<7} {}: {}", c.status, c.name, c.detail)?;
                    if let Some(w) = &c.witness {
                        writeln!(out, "        witness: {w}")?;
                    }
                }
                for n in &s.notes {
                    writeln!(out, "   | {n}")?;
                }
            }
            writeln!(
                out,
                "{} passed, {} failed, {} skipped",
                self.count(Status::Pass),
                self.count(Status::Fail),
                self.count(Status::Skipped)
            )?;
        }
        if format == Format::Both {
            writeln!(out)?;
        }
        if format != Format::Human {
            writeln!(out, "command\t{}", self.command)?;
            for s in &self.sections {
                for c in &s.checks {
                    write!(out, "check\t{}\t{}\t{}\t{}", s.title, c.name, c.status, c.detail)?;
                    if let Some(w) = &c.witness {
                        write!(out, "\twitness={w}")?;
                    }
                    writeln!(out)?;
                }
                for n in &s.notes {
                    writeln!(out, "note\t{}\t{n}", s.title)?;
                }
            }
            writeln!(
                out,
                "summary\tpass={}\tfail={}\tskipped={}",
                self.count(Status::Pass),
                self.count(Status::Fail),
                self.count(Status::Skipped)
            )?;
        }
        Ok(())
    }
}

/// Matrix on one line: rows separated by `;`.
pub fn inline_matrix(a: &fermionant::algebra::RationalMatrix) -> String {
    (0..a.n()).map(|i| a.row(i).iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("; ")
}

pub fn inline_graph(g: &fermionant::covers::WeightedDigraph) -> String {
    let edges: Vec<String> = g.edges().map(|(u, v, w)| format!("{u}>{v}:{w}")).collect();
    format!("n={} {}", g.n(), edges.join(" "))
}
