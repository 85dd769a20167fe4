use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex;
use whitney_ext::verify::sin_jet;
use whitney_ext::{CircleSet, Jet, Polynomial, Set64};

/// Jets accepted by `extend`: `const1`, `sin`, `poly:c0,c1,..` (in `x1`)
/// or `file:PATH`.
pub fn real_jet(spec: &str, set: &Set64, alpha: f64) -> Result<Jet<f64>> {
    let jet = match spec {
        "const1" => Jet::constant(set.dim(), alpha, set.len(), 1.0),
        "sin" => sin_jet(set, alpha)?,
        _ => {
            if let Some(rest) = spec.strip_prefix("poly:") {
                let coeffs = rest
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| anyhow!("bad polynomial coefficients `{rest}`"))?;
                let p = Polynomial::univariate(coeffs);
                if set.dim() != 1 {
                    bail!("poly: jets are univariate; the set has dimension {}", set.dim());
                }
                p.induce(set, alpha)?
            } else if let Some(path) = spec.strip_prefix("file:") {
                let text = std::fs::read_to_string(path).with_context(|| format!("cannot read jet file {path}"))?;
                Jet::parse(&text).with_context(|| format!("malformed jet file {path}"))?
            } else {
                bail!("unknown jet `{spec}`; expected const1, sin, poly:c0,c1,.. or file:PATH");
            }
        }
    };
    if jet.atom_count() != set.len() || jet.dim() != set.dim() {
        bail!(
            "jet has {} atoms in dimension {}, the set has {} in dimension {}",
            jet.atom_count(),
            jet.dim(),
            set.len(),
            set.dim()
        );
    }
    Ok(jet)
}

/// Jets accepted by `holo`: `const1`, `identity` (`F(z) = z`) or `exp`.
pub fn complex_jet(spec: &str, set: &CircleSet<f64>, alpha: f64) -> Result<Jet<Complex<f64>>> {
    let one = Complex::new(1.0, 0.0);
    match spec {
        "const1" => Ok(Jet::constant(1, alpha, set.len(), one)),
        "identity" => Ok(Jet::induce(1, alpha, set.len(), |a, j| {
            Some(match j.order() {
                0 => set.coordinate(a),
                1 => one,
                _ => Complex::new(0.0, 0.0),
            })
        })?),
        "exp" => Ok(Jet::induce(1, alpha, set.len(), |a, _| Some(set.coordinate(a).exp()))?),
        _ => bail!("unknown disk jet `{spec}`; expected const1, identity or exp"),
    }
}
