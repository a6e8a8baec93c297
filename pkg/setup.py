#!/usr/bin/env python3
"""
Setup script for mfscan
Installs dependencies, writes .env.example and generates sample inputs.
"""

import os
import sys
import subprocess
from pathlib import Path

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.configs.config import get_settings
from src.utils.data_generator import generate_sample_inputs
from src.utils.app_logging import setup_logger, enable_console_logging

logger = setup_logger()
enable_console_logging()  # Show logs during setup in terminal

SAMPLE_DIR = Path("data/samples")


def check_environment():
    """Validate MFSCAN_* variables (all optional, but must parse when set)"""
    try:
        settings = get_settings()
    except RuntimeError as e:
        print(f"❌ Invalid configuration: {e}")
        print("See .env.example for the accepted variables.")
        return None
    print(f"✅ Configuration ok (seed={settings.seed}, threads={settings.threads}, out={settings.out_dir})")
    return settings


def install_dependencies():
    """Install required Python packages"""
    print("📦 Installing required dependencies...")
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])
        print("✅ Dependencies installed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ Failed to install dependencies: {e}")
        return False


def create_directories(settings):
    for d in (settings.out_dir, Path(settings.log_path).parent, SAMPLE_DIR):
        Path(d).mkdir(parents=True, exist_ok=True)
    print(f"✅ Output directory {settings.out_dir} and log directory ready")


def populate_sample_data(settings):
    """Write synthetic example inputs"""
    print("📊 Generating sample inputs...")
    try:
        files = generate_sample_inputs(SAMPLE_DIR, settings.seed)
        for name, path in files.items():
            print(f"   • {name}: {path}")
        return True
    except Exception as e:
        print(f"❌ Failed to generate sample inputs: {e}")
        return False


def create_env_example():
    """Create example environment file"""
    env_example_content = """# mfscan configuration (every variable is optional)

# Base seed, unsigned 64-bit
MFSCAN_SEED=20240601
# Worker threads for per-input work
MFSCAN_THREADS=1
# Directory receiving run folders
MFSCAN_OUT_DIR=runs
# Application log file
MFSCAN_LOG_PATH=logs/mfscan.log
# Table format: csv or json
MFSCAN_FORMAT=csv
# Bits per axis for box counting (4..31)
MFSCAN_BITS=16
# Detrending polynomial order
MFSCAN_POLY_ORDER=5
# Mirror log records to stderr outside the CLI
MFSCAN_CONSOLE_LOGS=0
"""

    with open(".env.example", "w") as f:
        f.write(env_example_content)

    print("✅ Created .env.example file")


def main():
    """Main setup function"""
    print("🚀 mfscan Setup")
    print("="*50)

    create_env_example()

    settings = check_environment()
    if settings is None:
        print("\n⚠️ Setup incomplete. Fix the environment variables and run setup again.")
        return

    if "--skip-install" not in sys.argv and not install_dependencies():
        print("\n❌ Setup failed during dependency installation.")
        return

    create_directories(settings)

    user_input = input("\n❓ Would you like to generate sample inputs? (y/N): ").strip().lower()
    if user_input in ['y', 'yes']:
        if not populate_sample_data(settings):
            print("\n⚠️ Sample inputs were not generated.")

    print("\n🎉 Setup complete!")
    print("Try: python main_analysis.py suite data/samples/*.csv --run-name demo")


if __name__ == "__main__":
    main()
