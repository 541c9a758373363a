//! Labelled datasets: the toy generators and the CSV interchange format
//! `x1,...,xd,label` with labels `+1` / `-1`.

use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::classifiers::Label;
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::scalar::Real;

/// Feature rows with one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    inputs: Vec<Vec<T>>,
    labels: Vec<Label>,
}

impl<T: Real> Dataset<T> {
    /// Checks equal lengths, a common feature width, finite values and that
    /// both labels occur.
    pub fn new(inputs: Vec<Vec<T>>, labels: Vec<Label>) -> Result<Self> {
        if inputs.len() != labels.len() {
            return Err(Error::LengthMismatch {
                what: "labels",
                expected: inputs.len(),
                actual: labels.len(),
            });
        }
        let width = inputs.first().ok_or(Error::Empty("dataset"))?.len();
        if width == 0 {
            return Err(Error::Data("rows have no features".into()));
        }
        for (i, row) in inputs.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Data(format!(
                    "row {i} has {} features, expected {width}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!("row {i} has a non-finite feature")));
            }
        }
        if !labels.contains(&Label::A) || !labels.contains(&Label::B) {
            return Err(Error::Data("dataset must contain both labels".into()));
        }
        Ok(Self { inputs, labels })
    }

    pub fn inputs(&self) -> &[Vec<T>] {
        &self.inputs
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.inputs[0].len()
    }

    pub fn inputs_of(&self, label: Label) -> Vec<&[T]> {
        self.inputs
            .iter()
            .zip(&self.labels)
            .filter(|(_, l)| **l == label)
            .map(|(x, _)| x.as_slice())
            .collect()
    }

    pub fn count_a(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::A).count()
    }

    pub fn count_b(&self) -> usize {
        self.len() - self.count_a()
    }

    /// Same labels with every row passed through `f`.
    pub fn map_inputs(&self, f: impl Fn(&[T]) -> Vec<T>) -> Result<Self> {
        Self::new(
            self.inputs.iter().map(|x| f(x)).collect(),
            self.labels.clone(),
        )
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (1..=self.n_features()).map(|i| format!("x{i}")).collect();
        header.push("label".into());
        w.write_record(&header).map_err(csv_err)?;
        for (x, l) in self.inputs.iter().zip(&self.labels) {
            let mut rec: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            rec.push(l.sign().to_string());
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Data(e.to_string()))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = r.headers().map_err(csv_err)?.clone();
        let n = header.len();
        if n < 2 || header.get(n - 1) != Some("label") {
            return Err(Error::Data("header must be x1,...,xd,label".into()));
        }
        for (i, name) in header.iter().take(n - 1).enumerate() {
            if name != format!("x{}", i + 1) {
                return Err(Error::Data(format!("unexpected column name {name:?}")));
            }
        }
        let mut inputs = Vec::new();
        let mut labels = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            let row = line + 2;
            let x = rec
                .iter()
                .take(n - 1)
                .map(|f| {
                    f.parse::<T>()
                        .map_err(|_| Error::Data(format!("line {row}: bad number {f:?}")))
                })
                .collect::<Result<Vec<T>>>()?;
            let raw = &rec[n - 1];
            let label = raw
                .trim_start_matches('+')
                .parse::<i64>()
                .map_err(|_| Error::Data(format!("line {row}: bad label {raw:?}")))
                .and_then(Label::from_sign)?;
            inputs.push(x);
            labels.push(label);
        }
        Self::new(inputs, labels)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::read_csv(std::io::BufReader::new(f))
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        self.write_csv(std::io::BufWriter::new(f))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Data(e.to_string())
}

/// Noise-free point of a moon at parameter `t`: class A on the upper
/// half-circle `(cos t, sin t)`, class B on `(1 - cos t, 0.5 - sin t)`.
pub fn moon_point<T: Real>(label: Label, t: T) -> [T; 2] {
    let (s, c) = t.sin_cos();
    match label {
        Label::A => [c, s],
        Label::B => [T::one() - c, T::of(0.5) - s],
    }
}

/// Two interleaving half-circles with isotropic Gaussian noise. The first
/// `n_per_class` rows are class A.
pub fn gen_moons<T: Real>(n_per_class: usize, noise_std: T, seed: u64) -> Result<Dataset<T>> {
    if n_per_class == 0 {
        return Err(Error::InvalidArgument("n_per_class must be >= 1".into()));
    }
    if noise_std.is_nan() || noise_std < T::zero() {
        return Err(Error::InvalidArgument("noise must be >= 0".into()));
    }
    let noise = Normal::new(0.0, noise_std.to_f64_lossy())
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = substream(seed, 0);
    let mut inputs = Vec::with_capacity(2 * n_per_class);
    let mut labels = Vec::with_capacity(2 * n_per_class);
    for label in [Label::A, Label::B] {
        for _ in 0..n_per_class {
            let t = T::of(rng.gen_range(0.0..=std::f64::consts::PI));
            let [x, y] = moon_point(label, t);
            inputs.push(vec![
                x + T::of(noise.sample(&mut rng)),
                y + T::of(noise.sample(&mut rng)),
            ]);
            labels.push(label);
        }
    }
    Dataset::new(inputs, labels)
}

/// One-dimensional bands: class B uniform on `[-0.5, 0.5]`, class A uniform
/// on `[-2, -1] ∪ [1, 2]`. Separable by two thresholds but not by one.
pub fn gen_bands1d<T: Real>(n_per_class: usize, seed: u64) -> Result<Dataset<T>> {
    if n_per_class == 0 {
        return Err(Error::InvalidArgument("n_per_class must be >= 1".into()));
    }
    let mut rng = substream(seed, 0);
    let mut inputs = Vec::with_capacity(2 * n_per_class);
    let mut labels = Vec::with_capacity(2 * n_per_class);
    for i in 0..n_per_class {
        let mag: f64 = rng.gen_range(1.0..=2.0);
        // alternate sides so both bands are always populated
        let side = if i % 2 == 0 { 1.0 } else { -1.0 };
        inputs.push(vec![T::of(side * mag)]);
        labels.push(Label::A);
    }
    for _ in 0..n_per_class {
        inputs.push(vec![T::of(rng.gen_range(-0.5..=0.5))]);
        labels.push(Label::B);
    }
    Dataset::new(inputs, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn moon_endpoints() {
        assert_eq!(moon_point(Label::A, 0.0f64), [1.0, 0.0]);
        let [x, y] = moon_point(Label::B, FRAC_PI_2);
        assert!((x - 1.0).abs() < 1e-15 && (y + 0.5).abs() < 1e-15);
        let [x, _] = moon_point(Label::A, PI);
        assert!((x + 1.0).abs() < 1e-15);
    }

    #[test]
    fn moons_are_balanced_and_deterministic() {
        let d = gen_moons::<f64>(75, 0.1, 3).unwrap();
        assert_eq!((d.count_a(), d.count_b()), (75, 75));
        assert_eq!(d, gen_moons(75, 0.1, 3).unwrap());
        assert_ne!(d, gen_moons(75, 0.1, 4).unwrap());
        let clean = gen_moons::<f64>(20, 0.0, 1).unwrap();
        for (x, l) in clean.inputs().iter().zip(clean.labels()) {
            let r = match l {
                Label::A => (x[0].powi(2) + x[1].powi(2)).sqrt(),
                Label::B => ((x[0] - 1.0).powi(2) + (x[1] - 0.5).powi(2)).sqrt(),
            };
            assert!((r - 1.0).abs() < 1e-12);
        }
        assert!(gen_moons::<f64>(0, 0.1, 1).is_err());
        assert!(gen_moons::<f64>(3, -0.1, 1).is_err());
    }

    #[test]
    fn bands_layout() {
        let d = gen_bands1d::<f64>(40, 9).unwrap();
        for (x, l) in d.inputs().iter().zip(d.labels()) {
            match l {
                Label::B => assert!((-0.5..=0.5).contains(&x[0])),
                Label::A => assert!(x[0].abs() >= 1.0 && x[0].abs() <= 2.0),
            }
        }
    }

    #[test]
    fn bands_not_separable_by_one_threshold() {
        let d = gen_bands1d::<f64>(10, 5).unwrap();
        let mut xs: Vec<f64> = d.inputs().iter().map(|x| x[0]).collect();
        xs.sort_by(f64::total_cmp);
        let mut cuts = vec![xs[0] - 1.0];
        cuts.extend(xs.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        cuts.push(xs[xs.len() - 1] + 1.0);
        for t in cuts {
            for positive_above in [true, false] {
                let perfect = d.inputs().iter().zip(d.labels()).all(|(x, l)| {
                    let above = x[0] > t;
                    (above == positive_above) == (*l == Label::A)
                });
                assert!(!perfect, "threshold {t} separates the bands");
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let d = gen_moons::<f64>(7, 0.2, 11).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,label\n"));
        assert_eq!(Dataset::read_csv(buf.as_slice()).unwrap(), d);
    }

    #[test]
    fn csv_errors() {
        assert!(Dataset::<f64>::read_csv("a,b\n1,1\n".as_bytes()).is_err());
        assert!(Dataset::<f64>::read_csv("x1,label\n1,2\n0,-1\n".as_bytes()).is_err());
        assert!(Dataset::<f64>::read_csv("x1,label\nabc,1\n0,-1\n".as_bytes()).is_err());
        assert!(Dataset::<f64>::read_csv("x1,label\n1,1\n2,1\n".as_bytes()).is_err());
        let ok = Dataset::<f64>::read_csv("x1,label\n1.5,+1\n-0.5,-1\n".as_bytes()).unwrap();
        assert_eq!(ok.labels(), &[Label::A, Label::B]);
    }
}
