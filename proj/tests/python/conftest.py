import os
import shutil
import sys
import tempfile

# When running from the build tree (ctest sets these), assemble an importable
# package from the source __init__.py and the freshly built extension.
core_dir = os.environ.get("LINKCALC_CORE_DIR")
py_dir = os.environ.get("LINKCALC_PY_DIR")
if core_dir and py_dir:
    stage = tempfile.mkdtemp(prefix="linkcalc_py_")
    pkg = os.path.join(stage, "linkcalc")
    os.makedirs(pkg)
    shutil.copy(os.path.join(py_dir, "linkcalc", "__init__.py"), pkg)
    for name in os.listdir(core_dir):
        if name.startswith("_core") and name.endswith(".so"):
            os.symlink(os.path.join(core_dir, name), os.path.join(pkg, name))
    sys.path.insert(0, stage)
