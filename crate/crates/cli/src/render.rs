//! Text renderings of elements and refinement squares.

use refmon::{MonElem, Monoid, RefinementSquare};

/// `0`, or `<id:coord, ...>` where a free coordinate is `n` or `(n;g..)` and a
/// regular one is `(g..)`.
pub fn elem(m: &Monoid, x: &MonElem) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sys = m.system();
    let parts: Vec<String> = x
        .support
        .iter()
        .map(|i| {
            let l = m.local(x, i);
            let g: Vec<String> = l.g.coords.iter().map(ToString::to_string).collect();
            let c = match (&l.n, g.is_empty()) {
                (Some(n), true) => n.to_string(),
                (Some(n), false) => format!("({n};{})", g.join(",")),
                (None, _) => format!("({})", g.join(",")),
            };
            format!("{}:{c}", sys.id(i))
        })
        .collect();
    format!("<{}>", parts.join(", "))
}

/// The square as a table: columns indexed by `y1, y2`, rows by `x1, x2`.
pub fn square(m: &Monoid, x: [&MonElem; 2], y: [&MonElem; 2], s: &RefinementSquare) -> String {
    let cells = [
        ["".to_string(), elem(m, y[0]), elem(m, y[1])],
        [elem(m, x[0]), elem(m, &s.z11), elem(m, &s.z12)],
        [elem(m, x[1]), elem(m, &s.z21), elem(m, &s.z22)],
    ];
    let w: Vec<usize> = (0..3).map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap()).collect();
    let line = |r: &[String; 3]| format!("{:<w0$} | {:<w1$} | {:<w2$}", r[0], r[1], r[2], w0 = w[0], w1 = w[1], w2 = w[2]);
    let rule = format!("{}-+-{}-+-{}", "-".repeat(w[0]), "-".repeat(w[1]), "-".repeat(w[2]));
    let mut out = vec![line(&cells[0]), rule, line(&cells[1]), line(&cells[2])];
    for l in &mut out {
        *l = l.trim_end().to_string();
    }
    out.join("\n")
}
