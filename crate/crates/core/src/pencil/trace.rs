use std::fmt::Write;

/// Diagnostics of a root search: sampled `G`, brackets and notes.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub omega: f64,
    pub lambdas: Vec<f64>,
    pub g_values: Vec<f64>,
    pub brackets: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

impl Trace {
    pub fn new(omega: f64) -> Self {
        Self { omega, ..Self::default() }
    }

    pub fn record_samples(&mut self, lambdas: &[f64], values: &[f64]) {
        self.lambdas.extend_from_slice(lambdas);
        self.g_values.extend_from_slice(values);
    }

    pub fn record_bracket(&mut self, a: f64, b: f64) {
        self.brackets.push((a, b));
    }

    pub fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    /// Line-oriented text: comment header, then `lambda G` pairs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# omega {:e}", self.omega);
        for (a, b) in &self.brackets {
            let _ = writeln!(out, "# bracket {a:e} {b:e}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        let _ = writeln!(out, "# lambda G");
        for (l, g) in self.lambdas.iter().zip(&self.g_values) {
            let _ = writeln!(out, "{l:e} {g:e}");
        }
        out
    }
}
