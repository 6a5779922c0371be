MANIFEST_NAME = "manifest.json"
MANIFEST_SCHEMA_VERSION = "1"
CHECKPOINT_FORMAT_VERSION = 1
TRAIN_LOG_NAME = "train_log.jsonl"
LAST_CHECKPOINT_NAME = "last.pt"

# synthetic data
DEFAULT_RESOLUTION = 64
DEFAULT_DATASET_SIZE = 2000
DEFAULT_MASTER_SEED = 0
DEFAULT_INPUT_JITTER = 0.15 # fraction of the wearing-mask size
DEFAULT_VAL_FRACTION = 0.1
NEUTRAL_FILL = (128, 128, 128) # masked region of the model image
REFERENCE_BACKGROUND = (235, 235, 235)
MIN_POSE_ROTATION_MARGIN = 15.0 # degrees
MIN_POSE_SCALE_MARGIN = 0.20
MIN_COMPONENT_GAP_PX = 3
MAX_SAMPLE_ATTEMPTS = 16

# diffusion
DEFAULT_TRAIN_TIMESTEPS = 1000
DEFAULT_BETA_MIN = 1e-4
DEFAULT_BETA_MAX = 0.02
DEFAULT_SAMPLING_STEPS = 50

# networks
DEFAULT_MODEL_WIDTHS = (32, 64, 128)
DEFAULT_ATTENTION_HEADS = 4
DEFAULT_ORNAMENT_TOKENS = 16

# training
DEFAULT_EPOCHS = 20
DEFAULT_BATCH_SIZE = 16
DEFAULT_LEARNING_RATE = 1e-4
DEFAULT_GRAD_CLIP = 1.0
DEFAULT_LAMBDA1 = 1.0
DEFAULT_LAMBDA2 = 0.5
DEFAULT_LAMBDA_FLOOR = 0.1
DEFAULT_ALPHA_START = 0.1
DEFAULT_ALPHA_RAMP = 0.5

# inference / evaluation
CROP_SCALE_FACTOR = 1.5
MASK_THRESHOLD = 0.5
COLOR_HISTOGRAM_BINS = 16
MIN_COMPONENT_AREA_PX = 2
COLOR_DISTANCE_SCALE = 60.0 # RGB distance (0-255 units) mapped to an ornament score of 1
GRID_SCALE = 4 # upscaling of qualitative grids
