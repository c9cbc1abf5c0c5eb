//! Snowball English stemming for ROUGE tokens.

use rust_stemmers::{Algorithm, Stemmer};

pub struct EnglishStemmer(Stemmer);

impl EnglishStemmer {
    pub fn new() -> Self {
        Self(Stemmer::create(Algorithm::English))
    }

    pub fn stem(&self, token: &str) -> String {
        self.0.stem(token).into_owned()
    }
}

impl Default for EnglishStemmer {
    fn default() -> Self {
        Self::new()
    }
}
