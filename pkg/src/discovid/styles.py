"""Default style keyword list for brainstorming.

100 videography / composition terms sampled as style suggestions. The list
is replaceable via a one-keyword-per-line text file (CLI --style-list or
DISCO_STYLE_LIST); any replacement must also contain exactly 100 unique
lowercase entries.
"""

DEFAULT_STYLE_KEYWORDS = (
    # shots and framing
    "cinematic", "establishing shot", "extreme close up", "over the shoulder shot",
    "tracking shot", "dolly zoom", "whip pan", "dutch angle", "split screen", "freeze frame",
    # lenses and exposure
    "fisheye lens", "wide angle", "telephoto", "tilt shift", "macro photography",
    "aerial view", "bird's eye view", "worm's eye view", "long exposure", "double exposure",
    # focus and lighting
    "motion blur", "depth of field", "shallow focus", "soft focus", "sharp focus",
    "backlit", "rim lighting", "volumetric lighting", "low key lighting", "high key lighting",
    # optical and film artifacts
    "lens flare", "light leaks", "film grain", "chromatic aberration", "bloom pass",
    "vhs", "super 8", "35mm film", "technicolor", "chiaroscuro",
    # color treatments
    "sepia", "monochrome", "duotone", "pastel palette", "muted tones",
    "high contrast", "iridescent", "holographic", "neon glow", "psychedelic",
    # paint and drawing media
    "watercolor", "oil painting", "charcoal sketch", "pencil drawing", "line art",
    "ink wash", "airbrush", "impressionist", "expressionist", "cubist",
    # art movements
    "surrealist", "abstract", "pop art", "art deco", "art nouveau",
    "bauhaus", "brutalist", "minimalist", "maximalist", "baroque",
    # stylized media
    "cartoon", "anime", "storybook illustration", "pixel art", "low poly",
    "isometric", "cel shading", "claymation", "stop motion", "papercraft",
    # crafts and aesthetics
    "origami", "stained glass", "mosaic", "graffiti", "ukiyo-e",
    "gothic", "steampunk", "cyberpunk", "synthwave", "retro futurism",
    # rendering and motion
    "photorealistic", "hyperrealistic", "3d render", "ray tracing", "octane render",
    "fractal", "kaleidoscope", "glitch", "slow motion", "timelapse",
)
