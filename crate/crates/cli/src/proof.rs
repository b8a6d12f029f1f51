//! Proof files: a short text header and one decimal coefficient per line.
//!
//! ```text
//! cpf 1
//! problem triangles
//! task triangles[0]
//! digest 8c1d3a5f0e2b4c67
//! q 1152921504606847009
//! d 6
//! e 9
//! <d+1 coefficient lines, constant term first>
//! ```

use rsproof::{Modulus, Poly};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    pub problem: String,
    pub task: String,
    pub digest: u64,
    pub q: u64,
    pub d: usize,
    pub e: usize,
    /// Exactly `d + 1` values below `q`.
    pub coeffs: Vec<u64>,
}

impl ProofFile {
    pub fn from_poly(problem: &str, task: &str, digest: u64, proof: &Poly, d: usize, e: usize) -> Self {
        let mut coeffs = proof.coeffs().to_vec();
        coeffs.resize(d + 1, 0);
        ProofFile {
            problem: problem.into(),
            task: task.into(),
            digest,
            q: proof.modulus().q(),
            d,
            e,
            coeffs,
        }
    }

    pub fn poly(&self) -> Result<Poly, CliError> {
        let m = Modulus::new(self.q).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(Poly::new(m, self.coeffs.clone()))
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "cpf 1\nproblem {}\ntask {}\ndigest {:016x}\nq {}\nd {}\ne {}\n",
            self.problem, self.task, self.digest, self.q, self.d, self.e
        );
        for c in &self.coeffs {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines();
        let mut field = |key: &str| -> Result<String, CliError> {
            let line = lines.next().ok_or_else(|| CliError::Parse(format!("proof file ends before '{key}'")))?;
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| CliError::Parse(format!("expected '{key} ...', found '{line}'")))
        };
        if field("cpf")? != "1" {
            return Err(CliError::Parse("unsupported proof file version".into()));
        }
        let problem = field("problem")?;
        let task = field("task")?;
        let digest = u64::from_str_radix(&field("digest")?, 16).map_err(|_| CliError::Parse("bad digest".into()))?;
        let num = |s: String, what: &str| s.parse::<u64>().map_err(|_| CliError::Parse(format!("bad {what} '{s}'")));
        let q = num(field("q")?, "modulus")?;
        let d = num(field("d")?, "degree")? as usize;
        let e = num(field("e")?, "point count")? as usize;
        let coeffs: Vec<u64> = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| num(l.trim().to_string(), "coefficient"))
            .collect::<Result<_, _>>()?;
        if coeffs.len() != d + 1 {
            return Err(CliError::Parse(format!("expected {} coefficients, found {}", d + 1, coeffs.len())));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= q) {
            return Err(CliError::Parse(format!("coefficient {c} not below q = {q}")));
        }
        Ok(ProofFile {
            problem,
            task,
            digest,
            q,
            d,
            e,
            coeffs,
        })
    }
}
