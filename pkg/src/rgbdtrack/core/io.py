import os
import re
import cv2
import numpy as np
from glob import glob
from typing import (
    Callable,
    List,
    Optional,
    Union
)
from .exceptions import (
    FolderNotFoundError,
    FrameReadError
)
from .utils import make_list


def add_suffix(file: str, suffix: str) -> str:
    """Adds a suffix between a filename and its extension.
    
    Args:
        file (str): File ``str``.
        suffix (str): Suffix to be appended to ``file``.
    
    Returns:
        str: ``file`` but with the new added suffix.
    """
    filename, ext = os.path.splitext(file)
    return f"{filename}{suffix}{ext}"


def frame_number(file: str) -> int:
    """Returns the trailing frame number of an image file name.

    Princeton sequences name frames as ``r-<timestamp>-<index>.png`` and
    ``d-<timestamp>-<index>.png``; plain ``000123.png`` names also work.

    Args:
        file (str): Image file path.

    Returns:
        int: Frame number, or ``-1`` if the name carries no number.
    """
    numbers = re.findall(r"\d+", os.path.splitext(os.path.basename(file))[0])
    return int(numbers[-1]) if len(numbers) > 0 else -1


def get_dir_files(
        dir: Union[str, List[str]],
        ext: Union[str, List[str]] = ".png",
        recursive: bool = False,
        key: Optional[Callable] = None,
) -> List[str]:
    """Returns a `list` with all the files inside folder with extension `ext`.

    Args:
        dir (Union[str, List[str]]): Folder(s) to be searched.
        ext (Union[str, List[str]]): File extensions to be considered.
        recursive (bool): If `True`, the search inside each folder will be
            recursive.
        key (Optional[Callable]): Key function to sort the results. If it is
            not provided, files will be sorted alphabetically.

    Returns:
        `list` of `str` with the path to each retrieved file.

    Raises:
        FolderNotFoundError: If one of the folder(s) cannot be found.
    """
    dir = make_list(dir)
    ext = make_list(ext)

    for dir_ in dir:
        if not os.path.isdir(dir_):
            raise FolderNotFoundError(f"Folder not found: '{dir_}'")

    all_files = set()

    for dir_ in dir:
        for ext_ in ext:
            pattern = (
                os.path.join(dir_, "**", f"*{ext_}") if recursive
                else os.path.join(dir_, f"*{ext_}")
            )
            all_files.update(glob(pattern, recursive=recursive))

    # Filter out folders with file-like names
    all_files = [f for f in all_files if os.path.isfile(f)]

    return sorted(all_files, key=key)


def read_rgb(file: str) -> np.ndarray:
    """Reads an 8-bit color image as an ``(H, W, 3)`` RGB array.

    Args:
        file (str): Image file.

    Returns:
        np.ndarray: ``uint8`` RGB array.

    Raises:
        FrameReadError: If the file cannot be decoded.
    """
    bgr = cv2.imread(file, cv2.IMREAD_COLOR)

    if bgr is None:
        raise FrameReadError(f"Unable to read RGB frame '{file}'")

    return cv2.cvtColor(bgr, cv2.COLOR_BGR2RGB)


def read_depth(file: str, encoding: str = "mm") -> np.ndarray:
    """Reads a 16-bit depth map in millimeters.

    Args:
        file (str): 16-bit PNG depth file.
        encoding (str): ``"mm"`` for plain millimeters or ``"princeton"``
            for the benchmark layout, whose values are rotated left by 3
            bits.

    Returns:
        np.ndarray: ``uint16`` depth array, ``0`` meaning no measurement.

    Raises:
        FrameReadError: If the file cannot be decoded.
    """
    depth = cv2.imread(file, cv2.IMREAD_UNCHANGED)

    if depth is None or depth.ndim != 2:
        raise FrameReadError(f"Unable to read depth frame '{file}'")

    depth = depth.astype(np.uint16)

    if encoding == "princeton":
        depth = (depth >> 3) | (depth << 13)

    elif encoding != "mm":
        raise ValueError(f"Unknown depth encoding '{encoding}'")

    return depth


def write_rgb(rgb: np.ndarray, file: str) -> None:
    """Writes an ``(H, W, 3)`` RGB array to an image file.

    Args:
        rgb (np.ndarray): ``uint8`` RGB array.
        file (str): Output file.
    """
    if not cv2.imwrite(file, cv2.cvtColor(rgb, cv2.COLOR_RGB2BGR)):
        raise FrameReadError(f"Unable to write RGB frame '{file}'")


def write_depth(depth: np.ndarray, file: str) -> None:
    """Writes a depth map in millimeters as a 16-bit PNG.

    Args:
        depth (np.ndarray): Depth array.
        file (str): Output ``.png`` file.
    """
    if not cv2.imwrite(file, depth.astype(np.uint16)):
        raise FrameReadError(f"Unable to write depth frame '{file}'")
