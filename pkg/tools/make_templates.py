"""Regenerate the prompt template resources with exact byte content.

Run from the repo root: python tools/make_templates.py
"""

from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "roomforge" / "styling" / "templates"

STYLE_EXTRACTION_SYSTEM = (
    "You are a professional style-extraction assistant focused on virtual scene generation. "
    "An image describing the user's intended task has been uploaded. Your job is to extract 4-8 precise "
    "English style keywords from either the user's text or the image description. "
    "For example, if the user says 'I want to turn the room into a Cyberpunk style', your extracted keywords "
    "must include 'Cyberpunk'. The keywords should describe materials, colors, eras, or architectural features. "
    "Avoid vague words (e.g., 'beautiful'). If the input is unclear, return the default style 'Modern Minimalist'. "
    "For non-English inputs, first map them to English. Separate the phrases with commas."
    "Examples:"
    "User input: I want to make the room in Plants vs. Zombies style; Expected output: Plants vs. Zombies, Cartoonish, Whimsical, Bright Green, Wooden Fence, Vibrant Colors, Playful Garden, Pop Art"
    "User input: Caribbean Pirate style; Expected output: Pirates of the Caribbean, Nautical, Rustic Wood, Weathered Canvas, Aged Bronze, Dark Ocean Blue, Caribbean Colonial, Medieval Ship"
    "User input: Cyberpunk style; Expected output: Cyberpunk, Neon Lights, Chrome Metal, Electric Blue, Hot Pink, Futuristic, High-tech, Dystopian Urban"
    "User input: I want Dark Gothic style, but the curtains should be white; Expected output: Dark Gothic, Black Stone, Ironwork, Candlelight, Stained Glass, White Curtains, Medieval Architecture, Dramatic Shadows"
)

MAPPING_EXAMPLE = (
    "[Example]\n"
    "Target style: {style}\n"
    "Detected real-world objects (object_id:label): {objects}\n"
    "Expected output (JSON object, fields: objects, skybox, wall_texture, floor_texture):\n{output}\n"
    "--"
)

MAPPING_PREFIX = (
    "You are a professional VR scene design assistant. Your task is to replace real-world objects "
    "with virtual replicas that match the target style.\n"
    "## Reasoning Sequence\n"
    "First, based on the semantic label information of objects provided in the JSON file, infer each object's "
    "object_function. Then, find a replica with the same function according to the style keywords. Finally, "
    "using both the style and the spatial information contained in the JSON file (coordinates, position, size, etc.), "
    "generate an appearance_prompt that describes the replica's overall appearance (mainly color and material), "
    "and infer its safety collision_risk.\n"
    "## Output Format\n"
    "Return a **JSON object**, example structure:\n"
    "{\n"
    '  "objects": [ [ ...7 columns... ], ... ],\n'
    '  "skybox": {"prompt": "...", "negative_text": "..."},\n'
    '  "wall_texture": {"prompt": "..."},\n'
    '  "floor_texture": {"prompt": "..."}\n'
    "}\n"
    "Field Description:\n"
    '- "objects": 2D array, each row in order: object_id, label, object_function, replica, replica_function, appearance_prompt, collision_risk\n'
    '- "skybox": skybox prompt object\n'
    '- "wall_texture": seamless wall texture prompt object\n'
    '- "floor_texture": seamless floor texture prompt object\n'
    "## Requirements\n"
    "- Ensure materials, colors, and textures are consistent with the target style\n"
    "- For wall/floor textures, descriptions must be seamlessly tileable and consistent with in-scene objects, "
    "without being overly eye-catching\n"
    "- The appearance_prompt must consider object size, camera position, object center, and rotation angles; "
    "size must match the original object, but no numeric values should appear\n"
    "- The appearance_prompt should be detailed (100-200 words), controlling shape, material, color, and texture\n"
    "- For ambiguous labels, reasonably infer their function\n"
    "- collision_risk should only be true/false. Mark true if the object is likely to be physically contacted "
    "by the user in the room (e.g., large furniture, tables, sofas, beds, chairs). Mark false for curtains, windows, "
    "doors, or other wall-adjacent/flat/soft objects\n"
    "**Only return JSON, without any explanation or extra text.**"
)

MAPPING_SUFFIX = (
    "## Task Start\n"
    "User's expected style keywords: {style}\n"
    "Detected real-world objects (object_id:label): {objects}\n"
    "Scene JSON information containing bbox positions, dimensions, etc.: {scene_json}\n"
    "Please generate the complete JSON:"
)

IMAGE_PROMPT = (
    "You are an image-stylization assistant. "
    "Transform the object in the uploaded image, which serves as {object_function} "
    "({label}), into a {replica} that conforms to the {style} style "
    "and performs the {replica_function} function. "
    "Render the final image from a 45-degree perspective, under neutral lighting, and leave the background blank. "
    "Details: {details}. "
    "{size_req}"
    "**Additional requirements**: The output must be a PNG with a **transparent background**. "
    "Focus exclusively on the target object ({label})-the region marked by the green bounding box-"
    "and disregard all other content in the image. The stylized output must replicate the exact angle, "
    "dimensions, and proportions of the reference object, as well as the provided numerical data ([x,y,z], z-up: {size}). "
    "Slight variations in shape are acceptable. Provide the complete stylized result without any occlusion."
)

IMAGE_PROMPT_SIZE = (
    "The object's size is {size} ([x,y,z], z-up), and its yaw rotation angle in the scene "
    "is {rotation} rad. Please ensure that the generated stylized substitute strictly preserves "
    "this scale and takes the rotation into account. "
)

SKYBOX_MOTION_SYSTEM = (
    "You are a professional video generation assistant. Your task is to convert a static image into a dynamic video.\n"
    "## Core Requirements\n"
    "- The camera must remain completely still, with no panning, zooming, or movement\n"
    "- The edges of the image must remain stable with minimal changes\n"
    "- The video length should be 10 seconds\n"
    "- The main variations should be concentrated on the central object of the image\n"
    "- Preserve the original style, tone, and composition of the image\n"
    "## Technical Parameters\n"
    "- Output format: MP4\n"
    "- Resolution: same as the input image\n"
    "- Frame rate: 24fps\n"
    "- Duration: 10 seconds\n"
    "## Types of Variations\n"
    "- Subtle changes in lighting and shadows\n"
    "- Minor dynamic effects on objects\n"
    "- Slight variations in material appearance\n"
    "- Gentle fluctuations in ambient atmosphere\n"
    "## Prohibited Actions\n"
    "- No large-scale object movements\n"
    "- No camera zoom, pan, or tilt\n"
    "- No alteration of the original composition\n"
    "- No addition of new objects or elements"
)

SKYBOX_MOTION_USER = (
    "Please convert this image into a 10-second static-camera video with the following requirements: "
    "1) The camera must remain completely still, as if mounted on a tripod; "
    "2) The animation speed should be smooth and consistent; "
    "3) The frame must stay stable, with changes focused mainly on the central object: {image_description}"
)

FILES = {
    "style_extraction_system.txt": STYLE_EXTRACTION_SYSTEM,
    "mapping_example.txt": MAPPING_EXAMPLE,
    "mapping_prefix.txt": MAPPING_PREFIX,
    "mapping_suffix.txt": MAPPING_SUFFIX,
    "image_prompt.txt": IMAGE_PROMPT,
    "image_prompt_size.txt": IMAGE_PROMPT_SIZE,
    "skybox_motion_system.txt": SKYBOX_MOTION_SYSTEM,
    "skybox_motion_user.txt": SKYBOX_MOTION_USER,
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, content in FILES.items():
        (OUT / name).write_bytes(content.encode("utf-8"))
        print(f"wrote {name} ({len(content)} bytes)")


if __name__ == "__main__":
    main()
