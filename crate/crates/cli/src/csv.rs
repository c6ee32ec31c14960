use std::io::Write;

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    /// Reals use 17 significant digits so that parsing returns the same f64.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "NaN".into(),
            Cell::Num(x) if x.is_infinite() => if *x > 0.0 { "inf".into() } else { "-inf".into() },
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { metadata: vec![], columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn write<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.2250738585072014e-308, 5e-324, 0.0, 1.0 - f64::EPSILON] {
            let s = Cell::Num(x).render();
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(Cell::Num(f64::INFINITY).render().parse::<f64>().unwrap(), f64::INFINITY);
    }

    #[test]
    fn layout() {
        let mut t = Table::new(&["a", "b"]);
        t.meta("law", "psi");
        t.rows.push(vec![Cell::Int(3), Cell::Empty]);
        let mut buf = vec![];
        t.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# law=psi\na,b\n3,\n");
    }
}
