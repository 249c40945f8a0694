use vlse_core::*;

fn check(px: &[f64], pk: &[f64], rate: f64) -> (bool, Vec<String>) {
    let p_x = Distribution::new(px.to_vec()).unwrap();
    let p_k = Distribution::new(pk.to_vec()).unwrap();
    let mut vals = Vec::new();
    let mut mono = true;
    let mut prev = f64::INFINITY;
    for n in 4..=12usize {
        let params = match SchemeParams::new(2, n, rate, Mode::Practical) {
            Ok(p) => p,
            Err(_) => { vals.push("collide".into()); continue }
        };
        let sch = CipherScheme::from_params(params, KeyMethod::Balanced).unwrap();
        let rep = exact_leakage(&sch, &p_x, &p_k, 0.1).unwrap();
        if rep.mi_total > prev + 1e-12 { mono = false; }
        prev = rep.mi_total;
        vals.push(format!("{:.3e}", rep.mi_total));
    }
    (mono, vals)
}

fn main() {
    let configs: Vec<(Vec<f64>, Vec<f64>, f64)> = vec![
        (vec![0.9, 0.1], vec![0.5, 0.5], 0.6),
        (vec![0.9, 0.1], vec![0.5, 0.5], 0.7),
        (vec![0.9, 0.1], vec![0.5, 0.5], 0.9),
        (vec![0.95, 0.05], vec![0.5, 0.5], 0.6),
        (vec![0.95, 0.05], vec![0.5, 0.5], 0.8),
        (vec![0.9, 0.1], vec![0.6, 0.4], 0.8),
        (vec![0.85, 0.15], vec![0.5, 0.5], 0.8),
        (vec![0.97, 0.03], vec![0.5, 0.5], 0.5),
    ];
    for (px, pk, r) in configs {
        let (mono, vals) = check(&px, &pk, r);
        println!("px={px:?} pk={pk:?} R={r}: monotone={mono} {vals:?}");
    }
}
