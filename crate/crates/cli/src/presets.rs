//! Built-in equations with default search ranges.

pub struct Preset {
    pub name: &'static str,
    pub equation: &'static str,
    pub bounds: &'static [(&'static str, i64, i64)],
    pub about: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "brocard",
        equation: "1 * n! = x^2 - 1",
        bounds: &[("n", 0, 10)],
        about: "Brocard's problem n! + 1 = x^2",
    },
    Preset {
        name: "square-factorial",
        equation: "1 * n! = x^2",
        bounds: &[("n", 0, 300)],
        about: "factorials that are squares",
    },
    Preset {
        name: "ulas-2nn-square",
        equation: "1 * n! * 2^n = x^2",
        bounds: &[("n", 0, 100)],
        about: "2^n n! = x^2",
    },
    Preset {
        name: "two-factorials-square",
        equation: "1 * n! * m! = x^2",
        bounds: &[("n", 0, 30), ("m", 0, 30)],
        about: "products of two factorials that are squares",
    },
    Preset {
        name: "ramanujan-nagell",
        equation: "1 * 2^n = x^2 + 7",
        bounds: &[("n", 0, 80)],
        about: "2^n - 7 = x^2",
    },
    Preset {
        name: "erdos-oblath-plus",
        equation: "1 * n! = x^3 + y^3",
        bounds: &[("n", 0, 12), ("y", -60, 60)],
        about: "n! = x^3 + y^3",
    },
    Preset {
        name: "erdos-oblath-minus",
        equation: "1 * n! = x^3 - y^3",
        bounds: &[("n", 0, 12), ("y", -60, 60)],
        about: "n! = x^3 - y^3",
    },
    Preset {
        name: "dabrowski",
        equation: "1 * n! = x^2 + y^2 - 1",
        bounds: &[("n", 0, 9), ("y", -120, 120)],
        about: "n! + 1 = x^2 + y^2",
    },
    Preset {
        name: "ulas-double-factorial",
        equation: "1 * n!! = x^2 - 1",
        bounds: &[("n", 0, 60)],
        about: "n!! + 1 = x^2",
    },
    Preset {
        name: "xy-sum",
        equation: "1 * n! = x^2*y + y^2*x",
        bounds: &[("n", 0, 12)],
        about: "n! = x^2 y + y^2 x",
    },
    Preset {
        name: "xy-diff",
        equation: "1 * n! = y^2*x - x^2*y",
        bounds: &[("n", 0, 12)],
        about: "n! = y^2 x - x^2 y",
    },
    Preset {
        name: "xy-sum-7m",
        equation: "1 * n! * 7^m = x^2*y + y^2*x ; gcd(x,y)=1",
        bounds: &[("n", 0, 10), ("m", 0, 4)],
        about: "x^2 y + y^2 x = 7^m n! with gcd(x,y) = 1",
    },
    Preset {
        name: "xy-diff-7m",
        equation: "1 * n! * 7^m = x^2*y - y^2*x ; gcd(x,y)=1",
        bounds: &[("n", 0, 10), ("m", 0, 4)],
        about: "x^2 y - y^2 x = 7^m n! with gcd(x,y) = 1",
    },
    Preset {
        name: "x4y2-sum-3m",
        equation: "1 * m! * 3^m * n! = x^4*y^2 + y^4*x^2 ; gcd(x,y)=1",
        bounds: &[("m", 0, 6), ("n", 0, 8)],
        about: "x^4 y^2 + y^4 x^2 = 3^m m! n! with gcd(x,y) = 1",
    },
    Preset {
        name: "x4y2-diff-3m",
        equation: "1 * m! * 3^m * n! = x^4*y^2 - y^4*x^2 ; gcd(x,y)=1",
        bounds: &[("m", 0, 6), ("n", 0, 8)],
        about: "x^4 y^2 - y^4 x^2 = 3^m m! n! with gcd(x,y) = 1",
    },
    Preset {
        name: "takeda-quadratic",
        equation: "1 * n! = x^2 + x*y + y^2",
        bounds: &[("n", 0, 12), ("y", -200, 200)],
        about: "n! represented by the form x^2 + xy + y^2",
    },
    Preset {
        name: "takeda-cubic",
        equation: "1 * n! = x^3 + 2*y^3",
        bounds: &[("n", 0, 12), ("y", -200, 200)],
        about: "n! represented by the form x^3 + 2y^3",
    },
    Preset {
        name: "three-factorials-xy-sum",
        equation: "2 * n! * m! * l! = x^2*y + y^2*x",
        bounds: &[("n", 0, 6), ("m", 0, 6), ("l", 0, 6)],
        about: "2 n! m! l! = x^2 y + y^2 x",
    },
    Preset {
        name: "xy4-shape",
        equation: "1 * n! * m! = (x*y)^4*(x - y)^3",
        bounds: &[("n", 0, 10), ("m", 0, 10), ("y", -12, 12)],
        about: "n! m! = (xy)^4 (x - y)^3",
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        for p in PRESETS {
            let eq: polyfact::Equation = p.equation.parse().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            for v in eq.lhs.variables() {
                assert!(p.bounds.iter().any(|(b, _, _)| *b == v), "{}: no bound for {v}", p.name);
            }
        }
    }
}
