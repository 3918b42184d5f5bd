//! Interactive accept/reject of candidate CES entries.

use std::io::{BufRead, Write};

use gecsynth_core::llm::{CesEntry, CorruptionExampleSet, Origin, Reviewer};

/// Shows each candidate on `output` and reads `y`/`n` from `input`. End of
/// input rejects.
pub struct InteractiveReviewer<R, W> {
    input: R,
    output: W,
}

impl<R: BufRead, W: Write> InteractiveReviewer<R, W> {
    pub fn new(input: R, output: W) -> Self {
        InteractiveReviewer { input, output }
    }

    fn ask(&mut self, candidate: &CesEntry) -> std::io::Result<bool> {
        writeln!(self.output, "correct:   {}", candidate.correct)?;
        writeln!(self.output, "erroneous: {}", candidate.erroneous)?;
        writeln!(self.output, "tags:      {}", candidate.tags)?;
        loop {
            write!(self.output, "accept? [y/n] ")?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                writeln!(self.output)?;
                return Ok(false);
            }
            match line.trim().to_lowercase().as_str() {
                "y" | "yes" => return Ok(true),
                "n" | "no" => return Ok(false),
                _ => writeln!(self.output, "please answer y or n")?,
            }
        }
    }
}

impl<R: BufRead, W: Write> Reviewer for InteractiveReviewer<R, W> {
    fn review(&mut self, candidate: &CesEntry) -> bool {
        self.ask(candidate).unwrap_or(false)
    }
}

/// Re-reviews the model-generated entries of `ces`; seed-book entries are
/// kept as they are. Returns the kept set and how many entries were dropped.
pub fn review_ces<V: Reviewer + ?Sized>(ces: CorruptionExampleSet, reviewer: &mut V) -> (CorruptionExampleSet, usize) {
    let before = ces.entries.len();
    let entries: Vec<CesEntry> =
        ces.entries.into_iter().filter(|e| e.origin == Origin::SeedBook || reviewer.review(e)).collect();
    let removed = before - entries.len();
    (CorruptionExampleSet { entries, ..ces }, removed)
}
