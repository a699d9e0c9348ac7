use alloc::string::String;
use alloc::vec::Vec;

/// Splits `text` into lowercase runs of Unicode letters and digits, keeping
/// only runs of at least two characters, in document order.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut run_len = 0usize;
    for c in text.chars() {
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
            run_len += 1;
        } else if run_len > 0 {
            flush(&mut tokens, &mut current, run_len);
            run_len = 0;
        }
    }
    if run_len > 0 {
        flush(&mut tokens, &mut current, run_len);
    }
    tokens
}

fn flush(tokens: &mut Vec<String>, current: &mut String, run_len: usize) {
    if run_len >= 2 {
        tokens.push(core::mem::take(current));
    } else {
        current.clear();
    }
}
