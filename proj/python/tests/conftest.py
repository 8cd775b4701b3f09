import os
import sys

build_dir = os.environ.get("GRAPHBOOT_BUILD_PYTHON")
if build_dir:
    sys.meta_path[:] = [f for f in sys.meta_path if type(f).__name__ != "ScikitBuildRedirectingFinder"]
    sys.path.insert(0, build_dir)
