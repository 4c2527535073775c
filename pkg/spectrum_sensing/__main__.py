from spectrum_sensing.cli import main

main()
