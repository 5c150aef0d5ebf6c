from absplan.cli import main

main()
