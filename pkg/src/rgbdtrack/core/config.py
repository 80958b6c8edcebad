from typing import (
    List,
    Tuple
)


class __Singleton__(type):
    """A singleton class to be used as `metaclass`."""
    _instances = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            cls._instances[cls] = super().__call__(*args, **kwargs)
        return cls._instances[cls]


class __Config__(metaclass=__Singleton__):
    """Internal package configuration singleton.

    !!! warning
        This singleton is not supposed to be accessed directly. Please use the
        respective setters and getters for each configuration.
    """
    def __init__(self):
        super().__init__()

        self._TEXT_COLORS = {
            "red": "\033[91m",
            "green": "\033[92m",
            "cyan": "\033[96m",
            "yellow": "\033[93m",
            "end_color": "\033[0m",
        }

        self._TEXT_DECORATORS = {
            "bold": "\033[1m",
            "end_decoration": "\033[0m",
        }

        self._TEXT_COLOR_TAGS = {
            "<error>": self._TEXT_COLORS["red"],
            "</error>": self._TEXT_COLORS["end_color"],
            "<warning>": self._TEXT_COLORS["yellow"],
            "</warning>": self._TEXT_COLORS["end_color"],
            "<green>": self._TEXT_COLORS["green"],
            "</green>": self._TEXT_COLORS["end_color"],
            "<cyan>": self._TEXT_COLORS["cyan"],
            "</cyan>": self._TEXT_COLORS["end_color"]
        }

        self._TEXT_DECORATOR_TAGS = {
            "<b>": self._TEXT_DECORATORS["bold"],
            "</b>": self._TEXT_DECORATORS["end_decoration"]
        }

        self._ALLOWED_IMAGE_EXTENSIONS = [".png", ".jpg", ".jpeg", ".ppm"]
        self._ALLOWED_CONFIG_EXTENSIONS = [".yaml", ".yml"]
        self._GROUND_TRUTH_FILENAMES = ["groundtruth.txt", "gt.txt"]
        self._INIT_FILENAME = "init.txt"
        self._COVERAGE_FILENAME = "coverage.txt"
        self._CATEGORIES_FILENAME = "categories.csv"
        self._DEPTH_ENCODINGS = ["mm", "princeton"]
        self._PRODUCER_NAME = "rgbdtrack"

        # Frames per second below which throughput is reported
        self._FPS_WARNING = 8.0
        self._FPS_FAILURE = 4.0

        # Princeton attribute tags, grouped by the axis they describe
        self._CATEGORY_TAGS = [
            "human", "animal", "rigid",
            "large", "small",
            "slow", "fast",
            "occlusion", "no-occlusion",
            "passive", "active"
        ]


def _get_text_color_tags() -> dict:
    """Returns all available text color tags.
    
    Returns:
        dict: Text color tags.
    """
    return __Config__()._TEXT_COLOR_TAGS


def _get_text_decorator_tags() -> dict:
    """Returns all available decorator tags.
    
    Returns:
        dict: Decorator tags.
    """
    return __Config__()._TEXT_DECORATOR_TAGS


def get_allowed_image_extensions() -> List[str]:
    """Returns the list of allowed RGB and depth image file extensions.
    
    Returns:
        List[str]: List of allowed image extensions.
    """
    return __Config__()._ALLOWED_IMAGE_EXTENSIONS


def get_allowed_config_extensions() -> List[str]:
    """Returns the list of allowed configuration file extensions.

    Returns:
        List[str]: List of allowed configuration extensions.
    """
    return __Config__()._ALLOWED_CONFIG_EXTENSIONS


def get_ground_truth_filenames() -> List[str]:
    """Returns the file names searched for per-frame ground truth boxes.

    Returns:
        List[str]: Candidate ground truth file names.
    """
    return __Config__()._GROUND_TRUTH_FILENAMES


def get_init_filename() -> str:
    """Returns the name of the file holding the initial bounding box."""
    return __Config__()._INIT_FILENAME


def get_coverage_filename() -> str:
    """Returns the name of the per-frame occlusion coverage file."""
    return __Config__()._COVERAGE_FILENAME


def get_categories_filename() -> str:
    """Returns the name of the dataset-level category metadata file."""
    return __Config__()._CATEGORIES_FILENAME


def get_category_tags() -> List[str]:
    """Returns the 11 attribute tags used to group benchmark sequences.

    Returns:
        List[str]: Attribute tags.
    """
    return __Config__()._CATEGORY_TAGS


def get_depth_encodings() -> List[str]:
    """Returns the supported depth PNG encodings.

    Returns:
        List[str]: ``mm`` stores millimeters as is, ``princeton`` stores
            them rotated by 3 bits.
    """
    return __Config__()._DEPTH_ENCODINGS


def get_producer_name() -> str:
    return __Config__()._PRODUCER_NAME


def get_fps_thresholds() -> Tuple[float, float]:
    """Returns the ``(warning, failure)`` frames per second thresholds."""
    return (__Config__()._FPS_WARNING, __Config__()._FPS_FAILURE)
