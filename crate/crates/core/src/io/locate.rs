//! Best-effort mapping from a JSON field path to a source line.

/// Line (1-based) of the key at the end of `path`, searching each key after
/// the position of its parent. Array indices in the path are skipped.
pub(crate) fn locate(text: &str, path: &str) -> Option<usize> {
    let mut from = 0;
    let mut found = None;
    for key in path.split('.') {
        let key = key.split('[').next().unwrap_or(key);
        if key.is_empty() {
            continue;
        }
        let needle = format!("\"{key}\"");
        let mut search = from;
        loop {
            let pos = text[search..].find(&needle)? + search;
            let rest = text[pos + needle.len()..].trim_start();
            if rest.starts_with(':') {
                from = pos + needle.len();
                found = Some(pos);
                break;
            }
            search = pos + needle.len();
        }
    }
    found.map(|pos| line_of(text, pos))
}

/// Line of the `n`-th (0-based) occurrence of `needle`.
pub(crate) fn locate_nth(text: &str, needle: &str, n: usize) -> Option<usize> {
    text.match_indices(needle).nth(n).map(|(pos, _)| line_of(text, pos))
}

pub(crate) fn line_of(text: &str, pos: usize) -> usize {
    text[..pos].bytes().filter(|&b| b == b'\n').count() + 1
}
