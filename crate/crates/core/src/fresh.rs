//! Process-wide fresh-name supply.
//!
//! Names are formed as `<stem>$<n>` where the stem is the input name with
//! any previous `$` suffix stripped, so repeated renaming stays readable.

use std::sync::atomic::{AtomicUsize, Ordering};

static COUNTER: AtomicUsize = AtomicUsize::new(1);

pub fn stem(name: &str) -> &str {
    match name.find('$') {
        Some(i) if i > 0 => &name[..i],
        _ => name,
    }
}

/// A name that has never been handed out before in this process.
pub fn fresh_name(base: &str) -> String {
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    format!("{}${}", stem(base), n)
}

/// A fresh name that also avoids every name for which `taken` holds.
///
/// User input may already contain `$`-names, so the counter alone is not
/// enough.
pub fn fresh_avoiding(base: &str, taken: impl Fn(&str) -> bool) -> String {
    loop {
        let n = fresh_name(base);
        if !taken(&n) {
            return n;
        }
    }
}
