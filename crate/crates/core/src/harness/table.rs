use std::fmt::Write;

use super::experiment::MethodResult;
use crate::io::format_e4;

pub const TABLE_HEADER: &str = "method,relative_l1,relative_l2,relative_linf";

/// One `%.4e` row per method, in the order given.
pub fn compare_table(results: &[MethodResult]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in results {
        let [l1, l2, linf] = r.errors;
        writeln!(
            out,
            "{},{},{},{}",
            r.method,
            format_e4(l1),
            format_e4(l2),
            format_e4(linf)
        )
        .unwrap();
    }
    out
}
