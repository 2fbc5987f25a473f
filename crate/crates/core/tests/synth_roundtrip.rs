use phonoskel::docs::{read_phono, read_sample3d, write_phono, write_sample3d};
use phonoskel::ingest::{parse_view_frames, write_video_document, View};
use phonoskel::model::{Attribute, RoleTable};
use phonoskel::pipeline::{run_sample, PipelineConfig};
use phonoskel::synth::{generate_sample, random_script, ScriptParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(params: &ScriptParams) -> PipelineConfig {
    PipelineConfig {
        source_fps: params.source_fps,
        target_fps: params.target_fps,
        fusion: params.fusion,
        phono: params.phono,
    }
}

#[test]
fn pipeline_recovers_scripted_attributes_through_pose_documents() {
    let roles = RoleTable::default();
    let params = ScriptParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..60 {
        let script = random_script(&params, &mut rng, "rt", 5 * i).unwrap();
        let s = generate_sample(&script).unwrap();
        let front_doc = write_video_document(&s.frontal, &roles);
        let side_doc = write_video_document(&s.side, &roles);
        let front = parse_view_frames(front_doc.as_bytes(), View::Frontal, &roles).unwrap();
        let side = parse_view_frames(side_doc.as_bytes(), View::Side, &roles).unwrap();
        let (built, phono) = run_sample(&front, &side, &s.annotation, &config(&params)).unwrap();

        assert_eq!(built.sample.frames.len(), script.n_frames);
        assert!(built.widths.iter().all(|w| !w.is_fallback()));
        for (got, want) in phono.frames.iter().zip(&s.expected.frames) {
            for attr in Attribute::CATEGORICAL {
                assert_eq!(
                    got.categorical(attr),
                    want.categorical(attr),
                    "{attr:?} of script {i}"
                );
                assert!((got.score(attr) - want.score(attr)).abs() < 1e-12);
            }
            assert!((got.mouth_opening.value - want.mouth_opening.value).abs() < 1e-9);
        }
    }
}

#[test]
fn dataset_documents_survive_a_round_trip() {
    let roles = RoleTable::default();
    let params = ScriptParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let script = random_script(&params, &mut rng, "doc", 0).unwrap();
        let s = generate_sample(&script).unwrap();
        let (built, phono) =
            run_sample(&s.frontal, &s.side, &s.annotation, &config(&params)).unwrap();

        let text = write_sample3d(&built.sample, &built.widths, &roles);
        let doc = read_sample3d(&text, &roles).unwrap();
        assert_eq!(doc.sample.meta, built.sample.meta);
        assert_eq!(doc.median_fallback, vec![false; built.widths.len()]);
        for (a, b) in doc.sample.frames.iter().zip(&built.sample.frames) {
            for ((_, p), (_, q)) in a.keypoints.iter().zip(b.keypoints.iter()) {
                assert!(
                    (p.x - q.x).abs() <= 5e-7
                        && (p.y - q.y).abs() <= 5e-7
                        && (p.z - q.z).abs() <= 5e-7
                );
            }
        }
        assert_eq!(write_sample3d(&doc.sample, &built.widths, &roles), text);

        let text = write_phono(&phono);
        assert_eq!(write_phono(&read_phono(&text).unwrap()), text);
    }
}
