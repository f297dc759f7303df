import hashlib
import json
import random

import pytest

from roomforge.errors import InvariantError, ValidationError
from roomforge.generation import MockLanguageModel
from roomforge.scene import parse_scene, serialize_scene
from roomforge.styling import (
    DEFAULT_STYLE,
    MAPPING_COLUMNS,
    MappingRow,
    MappingTable,
    SkyboxPrompt,
    StyleSpec,
    TexturePrompt,
    build_mapping_prompt,
    build_object_image_prompt,
    build_skybox_request,
    build_texture_prompt,
    extract_style,
    infer_mapping_table,
    resources,
)

# Frozen digests of the versioned prompt templates; any drift fails here.
TEMPLATE_DIGESTS = {
    "style_extraction_system.txt": "04295ad1fcaae694473a08734718c7a9ebf47ff0fc703b50ae8576b349804069",
    "mapping_prefix.txt": "6440520a1c5950ab835a986f7b6d79803cfbc407dc01265cfe41e256dadd7f64",
    "mapping_example.txt": "181243b0e3167b4d02d74d4e67c206eb3e903e8d1d3bd991e3c0c46523e21716",
    "mapping_suffix.txt": "96192ba7dd9732734cb2c87ad096898b56dd8dee198de458e2dfb6f773514f35",
    "image_prompt.txt": "0a88e6b7e87091c925c034342eb3fab59d4a5f95b65c71c8096399dcdf2303bf",
    "image_prompt_size.txt": "7a461b10696f1aacd12f4d6f3f545db259d308d048c1e328715b6477d2433a61",
    "skybox_motion_system.txt": "6e2f41eb1cdde4fc23e8bfabd8561840342483f899e5be3ea99bcf8d6f5610a4",
    "skybox_motion_user.txt": "448e024405c321cdf2cde6389fc9172a0c4363329fcb2fec3616403de672be19",
}


class StaticLanguageModel:
    """Test double replaying a fixed sequence of replies."""

    def __init__(self, replies):
        self.replies = list(replies)
        self.calls = []

    def complete(self, system, user, images=None):
        self.calls.append((system, user))
        if len(self.replies) > 1:
            return self.replies.pop(0)
        return self.replies[0]


class TestTemplates:
    def test_templates_byte_exact(self):
        for name, digest in TEMPLATE_DIGESTS.items():
            content = resources.template(name)
            assert hashlib.sha256(content.encode("utf-8")).hexdigest() == digest, name

    def test_markers_present(self):
        assert "4-8 precise" in resources.style_extraction_system()
        assert "'Modern Minimalist'" in resources.style_extraction_system()
        assert "object_id, label, object_function, replica, replica_function, appearance_prompt, collision_risk" in resources.mapping_prefix()
        assert "The camera must remain completely still" in resources.skybox_motion_system()
        assert "The video length should be 10 seconds" in resources.skybox_motion_system()


class TestExtractStyle:
    def test_cyberpunk_keywords(self):
        spec = extract_style(StyleSpec(raw_text="Cyberpunk style"), MockLanguageModel())
        assert "Cyberpunk" in spec.keywords
        assert 4 <= len(spec.keywords) <= 8
        assert not spec.degraded

    def test_unparseable_twice_falls_back(self):
        llm = StaticLanguageModel(["nonsense"])
        spec = extract_style(StyleSpec(raw_text="??"), llm)
        assert spec.keywords == [DEFAULT_STYLE]
        assert spec.degraded
        assert len(llm.calls) == 2  # one retry before the fallback

    def test_mock_echo_six_keywords(self):
        llm = StaticLanguageModel(["A, B, C, D, E, F"])
        spec = extract_style(StyleSpec(raw_text="anything"), llm)
        assert spec.keywords == ["A", "B", "C", "D", "E", "F"]

    def test_requires_text_or_image(self):
        with pytest.raises(InvariantError):
            extract_style(StyleSpec(raw_text=""), MockLanguageModel())

    def test_keyword_cardinality_enforced(self):
        with pytest.raises(InvariantError):
            StyleSpec(raw_text="x", keywords=["only", "three", "words"])
        with pytest.raises(InvariantError):
            StyleSpec(raw_text="x", keywords=[f"k{i}" for i in range(9)])
        StyleSpec(raw_text="x", keywords=["a", "b", "c", "d"])  # ok
        StyleSpec(raw_text="x", keywords=[DEFAULT_STYLE], degraded=True)  # ok


PIRATE = StyleSpec(
    raw_text="pirate",
    keywords=[
        "Pirates of the Caribbean", "Nautical", "Rustic Wood",
        "Weathered Canvas", "Aged Bronze", "Dark Ocean Blue",
    ],
)


class TestMappingInference:
    def test_fixture_rows_and_collision_rules(self, fixture_scene):
        table = infer_mapping_table(fixture_scene, PIRATE, MockLanguageModel())
        targets = fixture_scene.generation_targets()
        assert len(table.objects) == len(targets)
        by_id = {row.object_id: row for row in table.objects}
        assert by_id["obj_sofa"].collision_risk is True
        assert by_id["obj_curtains"].collision_risk is False
        for door_id in ("door_0", "door_1", "door_2"):
            assert by_id[door_id].collision_risk is False
        for row in table.objects:
            assert list(row.to_dict().keys()) == list(MAPPING_COLUMNS)

    def test_row_multiset_invariant_under_reordering(self, fixture_scene):
        table_a = infer_mapping_table(fixture_scene, PIRATE, MockLanguageModel())
        shuffled = parse_scene(serialize_scene(fixture_scene))
        rng = random.Random(5)
        rng.shuffle(shuffled.entities)
        table_b = infer_mapping_table(shuffled, PIRATE, MockLanguageModel())
        key = lambda t: sorted(json.dumps(r.to_dict(), sort_keys=True) for r in t.objects)
        assert key(table_a) == key(table_b)

    def test_missing_floor_texture_rejected(self, fixture_scene):
        base = json.loads(MockLanguageModel().complete("", _mapping_prompt(fixture_scene)))
        del base["floor_texture"]
        llm = StaticLanguageModel([json.dumps(base)])
        with pytest.raises(ValidationError) as err:
            infer_mapping_table(fixture_scene, PIRATE, llm)
        assert "floor_texture" in str(err.value)

    def test_bad_column_count_rejected(self, fixture_scene):
        base = json.loads(MockLanguageModel().complete("", _mapping_prompt(fixture_scene)))
        base["objects"][0] = base["objects"][0][:6]
        llm = StaticLanguageModel([json.dumps(base)])
        with pytest.raises(ValidationError) as err:
            infer_mapping_table(fixture_scene, PIRATE, llm)
        assert "7" in str(err.value)

    def test_non_boolean_collision_risk_rejected(self, fixture_scene):
        base = json.loads(MockLanguageModel().complete("", _mapping_prompt(fixture_scene)))
        base["objects"][0][6] = "yes"
        llm = StaticLanguageModel([json.dumps(base)])
        with pytest.raises(ValidationError):
            infer_mapping_table(fixture_scene, PIRATE, llm)

    def test_unknown_id_rows_dropped(self, fixture_scene):
        base = json.loads(MockLanguageModel().complete("", _mapping_prompt(fixture_scene)))
        base["objects"].append(
            ["obj_ghost", "ghost", "haunting", "ghost", "haunting", "boo " * 30, True]
        )
        llm = StaticLanguageModel([json.dumps(base)])
        table = infer_mapping_table(fixture_scene, PIRATE, llm)
        assert table.row_for("obj_ghost") is None

    def test_missing_row_triggers_one_reask_then_error(self, fixture_scene):
        base = json.loads(MockLanguageModel().complete("", _mapping_prompt(fixture_scene)))
        dropped = base["objects"].pop(0)
        incomplete = json.dumps(base)
        llm = StaticLanguageModel([incomplete, incomplete])
        with pytest.raises(ValidationError) as err:
            infer_mapping_table(fixture_scene, PIRATE, llm)
        assert dropped[0] in str(err.value)
        assert len(llm.calls) == 2

    def test_reask_recovers_missing_row(self, fixture_scene):
        mock = MockLanguageModel()
        full = json.loads(mock.complete("", _mapping_prompt(fixture_scene)))
        partial = dict(full)
        partial["objects"] = full["objects"][1:]
        recovery = dict(full)
        recovery["objects"] = full["objects"][:1]
        llm = StaticLanguageModel([json.dumps(partial), json.dumps(recovery)])
        table = infer_mapping_table(fixture_scene, PIRATE, llm)
        assert len(table.objects) == len(fixture_scene.generation_targets())


def _mapping_prompt(scene) -> str:
    return build_mapping_prompt(
        PIRATE, scene.generation_targets(), serialize_scene(scene).decode()
    )


class TestPromptBuilders:
    def _sofa_inputs(self, fixture_scene):
        entity = fixture_scene.entity("obj_sofa")
        row = MappingRow(
            object_id="obj_sofa",
            label="sofa",
            object_function="seating",
            replica="captain's bench",
            replica_function="seating",
            appearance_prompt="weathered oak bench with rope trim",
            collision_risk=True,
        )
        return row, entity

    def test_transparent_background_clause(self, fixture_scene):
        row, entity = self._sofa_inputs(fixture_scene)
        prompt = build_object_image_prompt(row, entity, PIRATE)
        assert "PNG with a **transparent background**" in prompt
        assert "green bounding box" in prompt

    def test_size_clause_embeds_numbers(self, fixture_scene):
        from roomforge.scene import OrientedBox, SceneEntity

        row, _ = self._sofa_inputs(fixture_scene)
        entity = SceneEntity(
            id="obj_sofa",
            kind="object",
            label="sofa",
            box=OrientedBox(center=[0, 0, 0.4], size=[2.0, 0.9, 0.8], yaw=0.52),
        )
        prompt = build_object_image_prompt(row, entity, PIRATE)
        assert "[2.0, 0.9, 0.8]" in prompt
        assert "yaw rotation angle" in prompt
        assert "0.52" in prompt

    def test_pure_template(self, fixture_scene):
        row, entity = self._sofa_inputs(fixture_scene)
        a = build_object_image_prompt(row, entity, PIRATE)
        b = build_object_image_prompt(row, entity, PIRATE)
        assert a == b

    def test_texture_wrapping(self):
        table = MappingTable(
            objects=[],
            skybox=SkyboxPrompt(prompt="sea", negative_text="land"),
            wall_texture=TexturePrompt(prompt="weathered ship planks"),
            floor_texture=TexturePrompt(prompt="scrubbed deck boards"),
        )
        wall = build_texture_prompt("wall", table)
        assert "weathered ship planks" in wall and "seamless" in wall
        floor = build_texture_prompt("floor", table)
        assert "scrubbed deck boards" in floor
        with pytest.raises(ValueError):
            build_texture_prompt("ceiling", table)

    def test_skybox_request(self):
        table = MappingTable(
            objects=[],
            skybox=SkyboxPrompt(prompt="open sea", negative_text="modern buildings"),
            wall_texture=TexturePrompt(prompt="planks"),
            floor_texture=TexturePrompt(prompt="deck"),
        )
        req = build_skybox_request(table)
        assert "camera must remain completely still" in req.motion_instruction
        assert req.negative_text == "modern buildings"
        assert req.duration_s == 10
