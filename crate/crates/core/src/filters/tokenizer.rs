//! The pipeline tokenizer.
//!
//! Lowercase word/punctuation tokens: maximal alphanumeric runs become one
//! token (letters lowercased, digits kept), every other non-whitespace
//! character is a single-char token, whitespace separates. Token counts,
//! n-gram decontamination, and the reference-model vocabulary all share
//! this definition; the version string ties an n-gram index to the
//! tokenizer that built it.

pub const TOKENIZER_VERSION: &str = "ws-punct-v1";

pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            for lc in ch.to_lowercase() {
                word.push(lc);
            }
        } else {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
            if !ch.is_whitespace() {
                tokens.push(ch.to_string());
            }
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

/// Token count under the pipeline tokenizer.
pub fn count_tokens(text: &str) -> usize {
    tokenize(text).len()
}
