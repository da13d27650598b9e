use crate::error::{Error, Result};

/// Ordered qubit labels. The first label is the most significant bit of the
/// computational-basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegisterSet {
    labels: Vec<String>,
}

impl RegisterSet {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::RegisterCollision(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Labels `q0, q1, ...`.
    pub fn anonymous(n: usize) -> Self {
        Self { labels: (0..n).map(|i| format!("q{i}")).collect() }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownRegister(label.to_string()))
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut labels = self.labels.clone();
        for l in &other.labels {
            if labels.contains(l) {
                return Err(Error::RegisterCollision(l.clone()));
            }
            labels.push(l.clone());
        }
        Ok(Self { labels })
    }

    pub fn without(&self, drop: &[usize]) -> Self {
        Self {
            labels: self.labels.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, l)| l.clone()).collect(),
        }
    }
}
