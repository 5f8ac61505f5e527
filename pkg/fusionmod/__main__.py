from fusionmod.cli import main

raise SystemExit(main())
