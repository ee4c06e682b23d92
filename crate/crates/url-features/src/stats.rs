/// The fixed, ordered special-symbol set counted at URL, host and path
/// level. The feature layout depends on this order; do not reorder.
pub const SYMBOLS: [char; 16] = [
    '.', '-', '_', '/', '?', '=', '@', '&', '!', ',', '~', '*', '#', '$', '%', '+',
];

pub const SYMBOL_COUNT: usize = SYMBOLS.len();

/// Per-symbol occurrence counts for `text`, in `SYMBOLS` order.
/// None counts as the empty string.
pub fn count_symbols(text: Option<&str>) -> [u32; SYMBOL_COUNT] {
    let mut counts = [0u32; SYMBOL_COUNT];
    let Some(text) = text else { return counts };
    for c in text.chars() {
        if let Some(idx) = SYMBOLS.iter().position(|&s| s == c) {
            counts[idx] += 1;
        }
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CharStats {
    pub length: u32,
    pub digits: u32,
    pub letters: u32,
    pub vowels: u32,
}

/// Character composition of `text`: total length, ASCII digits, ASCII
/// letters, and vowels (a/e/i/o/u, case-insensitive).
pub fn char_stats(text: Option<&str>) -> CharStats {
    let Some(text) = text else { return CharStats::default() };
    let mut stats = CharStats::default();
    for c in text.chars() {
        stats.length += 1;
        if c.is_ascii_digit() {
            stats.digits += 1;
        } else if c.is_ascii_alphabetic() {
            stats.letters += 1;
            if matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u') {
                stats.vowels += 1;
            }
        }
    }
    stats
}
