import numpy as np
import pytest
from rgbdtrack.core.exceptions import ConfigurationError
from scipy import io as sio
from rgbdtrack.tracking.colornames import (
    COLOR_NAMES,
    MAT_COLOR_NAMES,
    ColorNamesTable,
    builtin_table,
    convert_mat_lookup,
    import_mat_table,
    load_table,
    save_table,
    table_index
)


def test_table_index():
    pixels = np.array([[0, 0, 0], [255, 255, 255], [8, 16, 24]])
    np.testing.assert_array_equal(
        table_index(pixels), [0, 32767, 1 * 1024 + 2 * 32 + 3]
    )


def test_builtin_table_prototypes():
    table = builtin_table()
    pixels = np.array([[255, 0, 0], [0, 0, 255], [250, 250, 250]])
    names = [COLOR_NAMES[i] for i in table(pixels).argmax(axis=-1)]
    assert names == ["red", "blue", "white"]


def test_saved_layout(tmp_path):
    file = str(tmp_path / "cn.bin")
    save_table(builtin_table(), file)
    raw = np.fromfile(file, dtype="<f4")

    assert raw.size == 32768 * 10
    np.testing.assert_array_equal(
        raw.reshape(32768, 10), builtin_table().lookup
    )
    np.testing.assert_array_equal(load_table(file).lookup, raw.reshape(-1, 10))


def test_load_errors(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        load_table(str(tmp_path / "missing.bin"))

    short = tmp_path / "short.bin"
    np.zeros(10, dtype="<f4").tofile(str(short))

    with pytest.raises(ConfigurationError, match="expected"):
        load_table(str(short))


def test_invalid_table():
    with pytest.raises(ConfigurationError):
        ColorNamesTable(np.ones((10, 10), dtype=np.float32))

    with pytest.raises(ConfigurationError):
        ColorNamesTable(np.ones((32768, 10), dtype=np.float32))


def _mat_lookup() -> np.ndarray:
    # Grey everywhere, pure red and pure blue bins named in MATLAB row order
    lookup = np.zeros((32768, 11))
    lookup[:, MAT_COLOR_NAMES.index("grey")] = 1.0
    lookup[31] = 0.0
    lookup[31, MAT_COLOR_NAMES.index("red")] = 1.0
    lookup[31 * 1024] = 0.0
    lookup[31 * 1024, MAT_COLOR_NAMES.index("blue")] = 1.0
    return lookup


def test_convert_mat_lookup():
    table = convert_mat_lookup(_mat_lookup())
    pixels = np.array([[255, 0, 0], [0, 0, 255], [128, 128, 128]])
    p = table(pixels)

    assert p[0, COLOR_NAMES.index("red")] == 1.0
    assert p[1, COLOR_NAMES.index("blue")] == 1.0
    assert p[2, COLOR_NAMES.index("black")] == 0.5
    assert p[2, COLOR_NAMES.index("white")] == 0.5


def test_convert_mat_lookup_shape():
    with pytest.raises(ConfigurationError, match="shape"):
        convert_mat_lookup(np.ones((32768, 3)))


def test_import_mat_table(tmp_path):
    file = str(tmp_path / "w2c.mat")
    sio.savemat(file, {"w2c": _mat_lookup()})
    table = import_mat_table(file)

    assert COLOR_NAMES[table(np.array([255, 0, 0])).argmax()] == "red"

    with pytest.raises(ConfigurationError, match="not found"):
        import_mat_table(file, variable="w2crs")

    with pytest.raises(ConfigurationError, match="not found"):
        import_mat_table(str(tmp_path / "missing.mat"))
