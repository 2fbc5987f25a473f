use phonoskel::fuse::{fuse_frame, normalize_sample, FusionConfig, SideCameraSide};
use phonoskel::ingest::{parse_view_frames, write_video_document, View, ViewFrame2D};
use phonoskel::model::{
    cross_product, euclidean_distance, Depth, DirectionSet, Group, Groups, Hand, Horizontal,
    Keypoint2D, RoleTable, Vector3, Vertical,
};
use phonoskel::phono::{assign_handshapes, classify_direction, mouth_opening, palm_normal};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -1e3..1e3f64
}

fn vector() -> impl Strategy<Value = Vector3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

fn direction_set() -> impl Strategy<Value = DirectionSet> {
    (
        prop::option::of(prop_oneof![Just(Horizontal::Right), Just(Horizontal::Left)]),
        prop::option::of(prop_oneof![Just(Vertical::Up), Just(Vertical::Down)]),
        prop::option::of(prop_oneof![Just(Depth::Body), Just(Depth::Front)]),
    )
        .prop_map(|(horizontal, vertical, depth)| DirectionSet {
            horizontal,
            vertical,
            depth,
        })
}

fn keypoint2d() -> impl Strategy<Value = Keypoint2D> {
    prop_oneof![
        1 => Just(Keypoint2D::MISSING),
        9 => (0.0..4000.0f64, 0.0..4000.0f64, 0.001..=1.0f64).prop_map(|(x, y, s)| Keypoint2D::new(x, y, s)),
    ]
}

fn view_frame(view: View, frame_index: usize) -> impl Strategy<Value = ViewFrame2D> {
    let group = |g: Group| prop::collection::vec(keypoint2d(), g.size());
    (
        group(Group::Body),
        group(Group::Face),
        group(Group::LeftHand),
        group(Group::RightHand),
    )
        .prop_map(move |(b, f, l, r)| ViewFrame2D {
            view,
            frame_index,
            keypoints: Groups::from_vecs([b, f, l, r]).unwrap(),
        })
}

proptest! {
    #[test]
    fn cross_is_anticommutative_and_orthogonal(a in vector(), b in vector()) {
        let ab = cross_product(a, b);
        prop_assert_eq!(ab, -cross_product(b, a));
        let scale = a.norm() * b.norm();
        let tol = 1e-12 * scale * scale.max(1.0);
        prop_assert!(ab.dot(a).abs() <= tol * a.norm().max(1.0));
        prop_assert!(ab.dot(b).abs() <= tol * b.norm().max(1.0));
    }

    #[test]
    fn triangle_inequality(a in vector(), b in vector(), c in vector()) {
        let lhs = euclidean_distance(a, c);
        let rhs = euclidean_distance(a, b) + euclidean_distance(b, c);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        prop_assert_eq!(euclidean_distance(a, b), euclidean_distance(b, a));
    }

    #[test]
    fn palm_normals_of_the_two_hands_are_opposite(w in vector(), l in vector(), i in vector()) {
        match (palm_normal(w, l, i, Hand::Left), palm_normal(w, l, i, Hand::Right)) {
            (Ok(left), Ok(right)) => prop_assert_eq!(left, -right),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            other => prop_assert!(false, "hands disagree on degeneracy: {:?}", other),
        }
    }

    #[test]
    fn direction_strings_round_trip(d in direction_set()) {
        let s = d.to_string();
        prop_assert_eq!(s.parse::<DirectionSet>().unwrap(), d);
        prop_assert_eq!(DirectionSet::parse_any_order(&s).unwrap(), d);
        prop_assert_eq!(s == "none", d.is_empty());
    }

    #[test]
    fn labels_follow_strict_thresholds(v in vector(), k in 0.0..100.0f64) {
        let d = classify_direction(v, k);
        prop_assert_eq!(d.horizontal == Some(Horizontal::Left), v.x > k);
        prop_assert_eq!(d.horizontal == Some(Horizontal::Right), v.x < -k);
        prop_assert_eq!(d.vertical == Some(Vertical::Down), v.y > k);
        prop_assert_eq!(d.vertical == Some(Vertical::Up), v.y < -k);
        prop_assert_eq!(d.depth == Some(Depth::Front), v.z > k);
        prop_assert_eq!(d.depth == Some(Depth::Body), v.z < -k);
        prop_assert!(d.len() <= 3);
    }

    #[test]
    fn classification_is_scale_invariant(v in vector(), k in 0.01..10.0f64, e in -20i32..20, c in 0.01..100.0f64) {
        let p = 2f64.powi(e);
        prop_assert_eq!(classify_direction(v, k), classify_direction(v * p, k * p));
        let clear = [v.x, v.y, v.z].iter().all(|x| (x.abs() - k).abs() > 1e-9 * k.max(x.abs()));
        if clear {
            prop_assert_eq!(classify_direction(v, k), classify_direction(v * c, k * c));
        }
    }

    #[test]
    fn mouth_opening_is_translation_invariant(
        ls in vector(), li in vector(), cr in vector(), cl in vector(), t in vector()
    ) {
        prop_assume!(euclidean_distance(cr, cl) > 1e-3);
        let a = mouth_opening(ls, li, cr, cl).unwrap();
        let b = mouth_opening(ls + t, li + t, cr + t, cl + t).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn handshape_split_covers_all_frames(n in 0usize..200) {
        let shapes = assign_handshapes(n, 'i', 'f');
        prop_assert_eq!(shapes.len(), n);
        prop_assert_eq!(shapes.iter().filter(|&&c| c == 'i').count(), n.div_ceil(2));
        prop_assert!(shapes.windows(2).all(|w| w[0] <= w[1] || w == ['i', 'f']));
    }

    #[test]
    fn view_documents_round_trip_bit_exact(frames in prop::collection::vec(view_frame(View::Side, 0), 1..4)) {
        let roles = RoleTable::default();
        let frames: Vec<ViewFrame2D> = frames
            .into_iter()
            .enumerate()
            .map(|(i, mut f)| { f.frame_index = 3 * i + 1; f })
            .collect();
        let text = write_video_document(&frames, &roles);
        let back = parse_view_frames(text.as_bytes(), View::Side, &roles).unwrap();
        prop_assert_eq!(back, frames);
    }

    #[test]
    fn fusion_is_scale_equivariant(
        front in view_frame(View::Frontal, 0),
        side in view_frame(View::Side, 0),
        c in 0.01..100.0f64,
        left in any::<bool>(),
    ) {
        let cfg = FusionConfig {
            side_camera_side: if left { SideCameraSide::SignerLeft } else { SideCameraSide::SignerRight },
            ..FusionConfig::default()
        };
        let scale = |f: &ViewFrame2D| ViewFrame2D {
            keypoints: f.keypoints.map(|_, k| Keypoint2D { x: k.x * c, y: k.y * c, score: k.score }),
            ..f.clone()
        };
        let base = normalize_sample(&[fuse_frame(&front, &side, &cfg)], &cfg);
        let scaled = normalize_sample(&[fuse_frame(&scale(&front), &scale(&side), &cfg)], &cfg);
        match (base, scaled) {
            (Ok(a), Ok(b)) => {
                for ((_, p), (_, q)) in a.frames[0].keypoints.iter().zip(b.frames[0].keypoints.iter()) {
                    prop_assert_eq!(p.score, q.score);
                    prop_assert!(euclidean_distance(p.position(), q.position()) <= 1e-9 * p.position().norm().max(1.0));
                }
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            other => prop_assert!(false, "scaling changed normalizability: {:?}", other.0.is_ok()),
        }
    }
}
