//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Arithmetic is exact, so every comparison has tolerance zero.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Signed;
use pwl_lattice::arrangement::{enumerate_cells, Arrangement, CellComplex};
use pwl_lattice::extension::facet_interior_point;
use pwl_lattice::geometry::Hyperplane;
use pwl_lattice::latticizer::{analyze, Representation, WitnessStrategy};
use pwl_lattice::rational::{int, ratio, Point, Rational};
use pwl_lattice::sample::{random_affine, random_lattice, random_points, random_rational};
use pwl_lattice::{
    extend_to_space, import_relu, lattice_to_pwl, radial_extend, verify_symbolic, AffineFunc, LatticePolynomial,
    Polyhedron, PwlFunction,
};
use pwl_lattice_cli::{Manifest, Payload};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load(path: &Path) -> Payload {
    Manifest::from_json(&std::fs::read_to_string(path).unwrap()).unwrap().payload
}

fn load_pwl(path: &Path) -> PwlFunction {
    match load(path) {
        Payload::Pwl(d) => d.to_core().unwrap(),
        other => panic!("{} is {}", path.display(), other.kind()),
    }
}

fn load_lattice(path: &Path) -> LatticePolynomial {
    match load(path) {
        Payload::Lattice(d) => d.to_core().unwrap(),
        other => panic!("{} is {}", path.display(), other.kind()),
    }
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pwl-lattice")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn work_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pwl-lattice-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn lin(coeffs: &[i64], offset: i64) -> AffineFunc {
    AffineFunc::new(coeffs.iter().map(|&c| int(c)).collect(), int(offset))
}

fn cube(dim: usize, r: i64) -> Polyhedron {
    Polyhedron::cube(dim, int(-r), int(r)).unwrap()
}

const FIXTURES: [(&str, &str); 3] = [("A", "pwl_A.json"), ("B", "pwl_B.json"), ("D", "pwl_D.json")];

/// The stated representations, with components numbered from 0.
fn expected_polynomial(name: &str) -> LatticePolynomial {
    match name {
        "A" => LatticePolynomial::new(vec![lin(&[-1], 0), lin(&[1], 0)], vec![vec![0], vec![1]]),
        "B" => LatticePolynomial::new(vec![lin(&[0], 0), lin(&[1], 0), lin(&[0], 1)], vec![vec![0, 2], vec![1, 2]]),
        _ => LatticePolynomial::new(vec![lin(&[1, 0], 0), lin(&[0, 1], 0)], vec![vec![0], vec![1]]),
    }
    .unwrap()
}

/// Builds one fixture with the binary into `dir`.
fn build_fixture(dir: &Path, name: &str, file: &str, threads: &str) -> Result<(), String> {
    let out = dir.join(format!("lattice_{name}.json"));
    let (code, _) =
        binary(&["--threads", threads, "build", fixture(file).to_str().unwrap(), "-o", out.to_str().unwrap()]);
    ensure(code == 0, || format!("build of fixture {name} exited {code}"))
}

fn criterion_1(dir: &Path) -> Check {
    let mut times = Vec::new();
    for (name, file) in FIXTURES {
        let start = Instant::now();
        build_fixture(dir, name, file, "1")?;
        let f = load_pwl(&fixture(file));
        let built = load_lattice(&dir.join(format!("lattice_{name}.json")));
        let expected = expected_polynomial(name);
        let report = verify_symbolic(&f, &built).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("fixture {name}: {report}"))?;
        let points = random_points(&mut ChaCha8Rng::seed_from_u64(1), f.domain(), 1000).unwrap();
        for x in &points {
            let v = built.evaluate(x).unwrap();
            ensure(v == expected.evaluate(x).unwrap() && v == f.eval(x).unwrap(), || {
                format!("fixture {name} differs at {x:?}")
            })?;
        }
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(1), || format!("fixture {name} took {elapsed:?}"))?;
        times.push(format!("{name} {:.3}s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "fixtures A, B, D built, verified symbolically and at 1000 points each, limit 1s each ({})",
        times.join(", ")
    ))
}

struct Instance {
    original: LatticePolynomial,
    f: PwlFunction,
    rep: Representation,
}

fn random_instances() -> Vec<Result<Instance, String>> {
    (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
            let dim = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=5);
            let original = random_lattice(&mut rng, dim, n, 10, 10);
            let f = lattice_to_pwl(&original, &cube(dim, 10)).map_err(|e| format!("instance {i}: {e}"))?;
            let rep = analyze(&f).map_err(|e| format!("instance {i}: {e}"))?;
            Ok(Instance { original, f, rep })
        })
        .collect()
}

fn criterion_2(instances: &[Result<Instance, String>]) -> Check {
    let failures: Vec<String> = instances
        .par_iter()
        .enumerate()
        .filter_map(|(i, inst)| {
            let inst = match inst {
                Ok(inst) => inst,
                Err(e) => return Some(e.clone()),
            };
            let check = || -> Result<(), String> {
                let report = verify_symbolic(&inst.f, &inst.rep.polynomial).map_err(|e| e.to_string())?;
                ensure(report.passed(), || format!("instance {i}: {report}"))?;
                let mut rng = ChaCha8Rng::seed_from_u64(5000 + i as u64);
                for x in random_points(&mut rng, inst.f.domain(), 200).unwrap() {
                    let v = inst.original.evaluate(&x).unwrap();
                    ensure(inst.rep.polynomial.evaluate(&x).unwrap() == v && inst.f.eval(&x).unwrap() == v, || {
                        format!("instance {i} differs at {x:?}")
                    })?;
                }
                Ok(())
            };
            check().err()
        })
        .collect();
    ensure(failures.is_empty(), || failures.join("\n"))?;
    let cells: usize = instances.iter().flatten().map(|i| i.rep.complex.len()).sum();
    Ok(format!("200 instances ({cells} cells) verified and round-tripped at 200 points each"))
}

fn random_complex(seed: u64) -> CellComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=10);
    let hs: Vec<Hyperplane> = (0..m)
        .filter_map(|_| {
            let g = random_affine(&mut rng, dim, 5, 3);
            Hyperplane::zero_set_of(&AffineFunc::new(g.coeffs, random_rational(&mut rng, 2, 3))).ok()
        })
        .collect();
    enumerate_cells(Arrangement::from_hyperplanes(&cube(dim, 2), &hs).unwrap()).unwrap()
}

fn check_metric(c: &CellComplex) -> Result<(), String> {
    let n = c.len();
    let mut masks = vec![0u32; n * n];
    for p in 0..n {
        for q in 0..n {
            let sep = c.separation(p, q).map_err(|e| e.to_string())?;
            masks[p * n + q] = sep.set.iter().fold(0, |m, &h| m | 1 << h);
            ensure(sep.distance == sep.set.len(), || "distance differs from separation size".into())?;
        }
    }
    let d = |p: usize, q: usize| masks[p * n + q].count_ones();
    for p in 0..n {
        for q in 0..n {
            ensure(d(p, q) == d(q, p), || format!("asymmetric at {p},{q}"))?;
            ensure((d(p, q) == 0) == (p == q), || format!("identity fails at {p},{q}"))?;
            let adjacent = c.common_facet_witness(p, q).map_err(|e| e.to_string())?.is_some();
            ensure(adjacent == (d(p, q) == 1), || format!("adjacency mismatch at {p},{q}"))?;
            let path = c.geodesic(p, q).map_err(|e| e.to_string())?;
            ensure(path.len() as u32 == d(p, q) + 1 && path[0] == p && path[path.len() - 1] == q, || {
                format!("bad geodesic {p} -> {q}")
            })?;
            ensure(path.windows(2).all(|w| d(w[0], w[1]) == 1), || format!("geodesic {p} -> {q} jumps"))?;
            for r in 0..n {
                let (pr, rq) = (d(p, r), d(r, q));
                ensure(d(p, q) <= pr + rq, || format!("triangle inequality fails at {p},{r},{q}"))?;
                let union = masks[p * n + r] | masks[r * n + q];
                ensure((d(p, q) == pr + rq) == (union == masks[p * n + q]), || {
                    format!("additivity criterion fails at {p},{r},{q}")
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    let results: Vec<(usize, usize, Result<(), String>)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let c = random_complex(9000 + i);
            (c.hyperplanes().len(), c.len(), check_metric(&c).map_err(|e| format!("arrangement {i}: {e}")))
        })
        .collect();
    let mut cells = 0;
    let mut triples = 0;
    let mut most = 0;
    for (m, n, r) in results {
        r?;
        cells += n;
        triples += n * n * n;
        most = most.max(m);
    }
    Ok(format!("50 arrangements (up to {most} hyperplanes, {cells} cells, {triples} triples)"))
}

fn criterion_4(instances: &[Result<Instance, String>]) -> Check {
    let counts: Vec<Result<usize, String>> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let inst = inst.as_ref().map_err(Clone::clone)?;
            let n = inst.rep.complex.len();
            for p in 0..n {
                for q in 0..n {
                    for s in [WitnessStrategy::Brute, WitnessStrategy::Inductive] {
                        let k = inst.rep.lemma_witness(p, q, s).map_err(|e| format!("instance {i}: {e}"))?;
                        ensure(inst.rep.below_on(p, k) && inst.rep.above_on(q, k), || {
                            format!("instance {i}: witness {k} for ({p},{q}) is wrong")
                        })?;
                    }
                }
            }
            Ok(n * n)
        })
        .collect();
    let mut pairs = 0;
    for c in counts {
        pairs += c?;
    }
    Ok(format!("{pairs} ordered cell pairs, both strategies, zero failures"))
}

fn triangle(vertices: [(i64, i64); 3]) -> Polyhedron {
    // Edges oriented so the third vertex lies on the closed side.
    let rows = (0..3)
        .map(|k| {
            let (a, b, c) = (vertices[k], vertices[(k + 1) % 3], vertices[(k + 2) % 3]);
            let normal = [b.1 - a.1, a.0 - b.0];
            let bound = normal[0] * a.0 + normal[1] * a.1;
            let s = if normal[0] * c.0 + normal[1] * c.1 <= bound { 1 } else { -1 };
            (vec![int(s * normal[0]), int(s * normal[1])], int(s * bound))
        })
        .collect();
    Polyhedron::from_rows(2, rows).unwrap()
}

fn criterion_5() -> Check {
    let t1 = triangle([(-1, 0), (-1, -1), (0, 0)]);
    let t2 = triangle([(0, 0), (1, 1), (1, 0)]);
    let t3 = triangle([(-1, 0), (1, 0), (0, -1)]);
    let g = [lin(&[0, -1], 0), lin(&[0, 1], 0)];
    let f = |x: &Point| -> Rational {
        if t1.contains(x) {
            g[0].eval(x)
        } else {
            assert!(t2.contains(x) || t3.contains(x), "point outside the three triangles");
            g[1].eval(x)
        }
    };
    let probes: Vec<(Point, &Polyhedron, [&Polyhedron; 2])> = vec![
        (vec![int(-1), int(-1)], &t1, [&t2, &t3]),
        (vec![ratio(1, 2), ratio(1, 2)], &t2, [&t1, &t3]),
        (vec![int(0), int(-1)], &t3, [&t1, &t2]),
    ];
    for (x, inside, others) in &probes {
        ensure(inside.contains(x) && others.iter().all(|t| !t.contains(x)), || {
            format!("probe {x:?} is not in exactly its own triangle")
        })?;
    }
    // every nonempty family of nonempty subsets of {g1, g2}
    let subsets = [vec![0], vec![1], vec![0, 1]];
    let mut distinct = BTreeSet::new();
    for family in 1u32..8 {
        let terms: Vec<Vec<usize>> = (0..3).filter(|b| family >> b & 1 == 1).map(|b| subsets[b].clone()).collect();
        let p = LatticePolynomial::new(g.to_vec(), terms).unwrap().simplify();
        distinct.insert(p.terms().to_vec());
    }
    ensure(distinct.len() == 4, || format!("expected 4 distinct polynomials, got {}", distinct.len()))?;
    for terms in &distinct {
        let p = LatticePolynomial::new(g.to_vec(), terms.clone()).unwrap();
        let miss = probes.iter().find(|(x, ..)| p.evaluate(x).unwrap() != f(x));
        ensure(miss.is_some(), || format!("{p} matches f at every probe"))?;
    }
    Ok("all 4 distinct max-min polynomials over {-x2, x2} differ from f at a probe point".into())
}

fn criterion_6() -> Check {
    let cases = [
        ("boundary_segment.json", vec![lin(&[-2], 0), lin(&[3], 0)]),
        ("boundary_square.json", vec![lin(&[1, 0], 0), lin(&[-1, 0], 0), lin(&[0, 1], 0), lin(&[0, -1], 0)]),
    ];
    for (file, expected) in cases {
        let b = match load(&fixture(file)) {
            Payload::Boundary(d) => d.to_core().unwrap(),
            other => return Err(format!("{file} is {}", other.kind())),
        };
        let f = radial_extend(&b).map_err(|e| e.to_string())?;
        let funcs: Vec<AffineFunc> = f.pieces().iter().map(|p| p.func.clone()).collect();
        ensure(funcs == expected, || format!("{file}: piece functions {funcs:?}"))?;
        ensure(f.validate().is_valid(), || format!("{file}: {}", f.validate()))?;
        ensure(f.eval(&b.center).unwrap() == int(0), || format!("{file}: nonzero at the center"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for x in random_points(&mut rng, &b.polytope, 200).unwrap() {
            let fx = f.eval(&x).unwrap();
            for t in [ratio(1, 2), ratio(1, 3), ratio(2, 3)] {
                let y: Point = x.iter().zip(&b.center).map(|(xi, ai)| ai + (xi - ai) * &t).collect();
                ensure(f.eval(&y).unwrap() == &fx * &t, || format!("{file}: not homogeneous at {x:?}"))?;
            }
        }
        for fd in &b.facet_data {
            let w = facet_interior_point(&b.polytope, fd.facet).ok_or("facet without interior point")?;
            let face = b.polytope.with_halfspace(
                pwl_lattice::Halfspace::closed(
                    b.polytope.halfspaces()[fd.facet].normal.iter().map(|c| -c).collect(),
                    -b.polytope.halfspaces()[fd.facet].bound.clone(),
                )
                .unwrap(),
            );
            let mut pts = vec![w];
            if b.polytope.dim() > 1 {
                // points of the facet: the polytope pressed onto the facet hyperplane
                let face = face.unwrap();
                let bbox = face.bounding_box().unwrap();
                for _ in 0..50 {
                    let x: Point = bbox
                        .iter()
                        .map(|(lo, hi)| pwl_lattice::sample::random_in_interval(&mut rng, lo, hi, 16))
                        .collect();
                    if face.contains(&x) {
                        pts.push(x);
                    }
                }
            }
            for x in pts {
                ensure(f.eval(&x).unwrap() == fd.func.eval(&x), || format!("{file}: boundary mismatch at {x:?}"))?;
            }
        }
        let p = pwl_lattice::build_representation(&f).map_err(|e| e.to_string())?;
        let report = verify_symbolic(&f, &p).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("{file}: {report}"))?;
    }
    Ok("segment and square: pieces -2x, 3x and x1, -x1, x2, -x2; center, homogeneity, boundary, verify".into())
}

fn criterion_7() -> Check {
    let f = load_pwl(&fixture("pwl_A.json"));
    let g = extend_to_space(&f, &cube(1, 5)).map_err(|e| e.to_string())?;
    ensure(g.validate().is_valid(), || format!("{}", g.validate()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut points: Vec<Point> = vec![vec![int(-5)], vec![int(5)]];
    points.extend(random_points(&mut rng, g.domain(), 98).unwrap());
    for x in &points {
        ensure(g.eval(x).unwrap() == x[0].abs(), || format!("extension differs from |x| at {x:?}"))?;
    }
    let p = pwl_lattice::build_representation(&g).map_err(|e| e.to_string())?;
    let report = verify_symbolic(&f, &p).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("extension disagrees with the original: {report}"))?;
    Ok("|x| on [-5,5] at 100 points including -5 and 5; agrees with the original on [-1,1]".into())
}

fn criterion_8(dir: &Path) -> Check {
    for (net_file, box_file) in [("relu_single.json", "box_2.json"), ("relu_abs.json", "box_2.json")] {
        let net = match load(&fixture(net_file)) {
            Payload::Relu(d) => d.to_core().unwrap(),
            other => return Err(format!("{net_file} is {}", other.kind())),
        };
        let bbox = match load(&fixture(box_file)) {
            Payload::Polyhedron(d) => d.to_core().unwrap(),
            other => return Err(format!("{box_file} is {}", other.kind())),
        };
        let f = import_relu(&net, &bbox).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for x in random_points(&mut rng, &bbox, 500).unwrap() {
            ensure(f.eval(&x).unwrap() == net.forward(&x).unwrap(), || format!("{net_file}: differs at {x:?}"))?;
        }
        let pwl = dir.join(format!("imported_{net_file}"));
        let lat = dir.join(format!("lattice_{net_file}"));
        let (pwl, lat) = (pwl.to_str().unwrap(), lat.to_str().unwrap());
        let net_path = fixture(net_file);
        let box_path = fixture(box_file);
        for (step, args) in [
            (
                "import-relu",
                vec!["import-relu", net_path.to_str().unwrap(), "--box", box_path.to_str().unwrap(), "-o", pwl],
            ),
            ("build", vec!["build", pwl, "-o", lat]),
            ("verify", vec!["verify", pwl, lat]),
        ] {
            let (code, _) = binary(&args);
            ensure(code == 0, || format!("{net_file}: {step} exited {code}"))?;
        }
    }
    Ok("both networks match the forward pass at 500 points; import, build, verify exit 0".into())
}

fn criterion_9(dir: &Path) -> Check {
    let parallel = dir.join("threads4");
    std::fs::create_dir_all(&parallel).unwrap();
    for (name, file) in FIXTURES {
        build_fixture(&parallel, name, file, "4")?;
        let file = format!("lattice_{name}.json");
        let (a, b) = (std::fs::read(dir.join(&file)).unwrap(), std::fs::read(parallel.join(&file)).unwrap());
        ensure(a == b, || format!("{file} differs between 1 and 4 threads"))?;
    }
    Ok("build outputs with --threads 1 and --threads 4 are byte-identical".into())
}

fn run(number: usize, limit: Option<Duration>, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(check))
        .unwrap_or_else(|e| Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
    let elapsed = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(_), Some(limit)) if elapsed >= limit => Err(format!("exceeded the {}s limit", limit.as_secs())),
        (o, _) => o,
    };
    let limit_text = limit.map(|l| format!(", limit {}s", l.as_secs())).unwrap_or_default();
    match &outcome {
        Ok(msg) => println!("criterion {number}: PASS ({:.2}s{limit_text}) {msg}", elapsed.as_secs_f64()),
        Err(msg) => println!("criterion {number}: FAIL ({:.2}s{limit_text}) {msg}", elapsed.as_secs_f64()),
    }
    outcome.is_ok()
}

fn main() {
    let dir = work_dir();
    let mut ok = true;
    ok &= run(1, None, || criterion_1(&dir));
    // Criteria 2 and 4 share the instances; generation counts toward criterion 2.
    let mut instances = Vec::new();
    ok &= run(2, Some(Duration::from_secs(60)), || {
        instances = random_instances();
        criterion_2(&instances)
    });
    ok &= run(3, Some(Duration::from_secs(60)), criterion_3);
    ok &= run(4, None, || criterion_4(&instances));
    ok &= run(5, None, criterion_5);
    ok &= run(6, None, criterion_6);
    ok &= run(7, None, criterion_7);
    ok &= run(8, None, || criterion_8(&dir));
    ok &= run(9, None, || criterion_9(&dir));
    let _ = std::fs::remove_dir_all(&dir);
    if !ok {
        std::process::exit(1);
    }
}
