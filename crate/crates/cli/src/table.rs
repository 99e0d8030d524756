use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub const SCHEMA: u32 = 1;

/// Column-ordered CSV with a schema line and free-form comment lines.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Fixed-precision scientific notation; empty for missing values.
pub fn num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.10e}"),
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}

/// Error text safe inside an unquoted CSV cell.
pub fn cell_text(s: &str) -> String {
    s.chars().map(|c| if matches!(c, ',' | '\n' | '\r' | '"') { ';' } else { c }).collect()
}

impl Table {
    pub fn new(header: Vec<String>) -> Table {
        Table { header, ..Default::default() }
    }

    pub fn render(&self) -> String {
        let mut s = format!("# schema={SCHEMA}\n");
        for c in &self.comments {
            writeln!(s, "# {c}").unwrap();
        }
        writeln!(s, "{}", self.header.join(",")).unwrap();
        for r in &self.rows {
            debug_assert_eq!(r.len(), self.header.len());
            writeln!(s, "{}", r.join(",")).unwrap();
        }
        s
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// One curve of the plot script: `(column, title)`.
pub struct Panel {
    pub ylabel: String,
    pub curves: Vec<String>,
    pub logscale_y: bool,
}

pub fn plot_script(csv: &Path, xlabel: &str, xcol: &str, panels: &[Panel], logscale_x: bool) -> String {
    let name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set datafile missing ''").unwrap();
    writeln!(s, "set key autotitle columnhead").unwrap();
    writeln!(s, "set xlabel '{xlabel}'").unwrap();
    if logscale_x {
        writeln!(s, "set logscale x").unwrap();
    }
    let panels: Vec<&Panel> = panels.iter().filter(|p| !p.curves.is_empty()).collect();
    if panels.len() > 1 {
        writeln!(s, "set multiplot layout {},1", panels.len()).unwrap();
    }
    for p in &panels {
        writeln!(s, "{}set logscale y", if p.logscale_y { "" } else { "un" }).unwrap();
        writeln!(s, "set ylabel '{}'", p.ylabel).unwrap();
        let curves: Vec<String> = p
            .curves
            .iter()
            .map(|c| format!("'{name}' using (column('{xcol}')):(column('{c}')) with linespoints title '{c}'"))
            .collect();
        writeln!(s, "plot {}", curves.join(", \\\n     ")).unwrap();
    }
    if panels.len() > 1 {
        writeln!(s, "unset multiplot").unwrap();
    }
    s
}

/// Writes the CSV to `out` (and the plot script next to it), or the CSV to stdout.
pub fn emit(table: &Table, out: Option<&Path>, script: impl FnOnce(&Path) -> String) -> io::Result<Option<PathBuf>> {
    let csv = table.render();
    match out {
        None => {
            io::stdout().write_all(csv.as_bytes())?;
            Ok(None)
        }
        Some(path) => {
            fs::write(path, csv)?;
            let gp = path.with_extension("gp");
            fs::write(&gp, script(path))?;
            Ok(Some(gp))
        }
    }
}
