import { ApiClient } from './api.js';
import { ExplorerStore } from './store.js';
import { renderApp } from './view.js';

const root = document.getElementById('app');
if (!root) throw new Error('missing #app element');

const store = new ExplorerStore(new ApiClient(''));
store.subscribe((state) => {
  root.innerHTML = renderApp(state);
});

function download(filename: string, text: string, type: string): void {
  const url = URL.createObjectURL(new Blob([text], { type }));
  const anchor = document.createElement('a');
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

root.addEventListener('click', (event) => {
  const target = (event.target as HTMLElement).closest<HTMLElement>('[data-action]');
  if (!target || target.hasAttribute('disabled')) return;
  const row = Number(target.dataset.row ?? -1);
  switch (target.dataset.action) {
    case 'open-system':
      void store.openSystem(Number(target.dataset.id));
      break;
    case 'back':
      store.closeProof();
      break;
    case 'add-row':
      store.addDraftRow();
      break;
    case 'remove-row':
      store.removeDraftRow(row);
      break;
    case 'run':
      void store.runAnalysis();
      break;
    case 'undo':
      void store.undoStage();
      break;
    case 'export-script': {
      const name = store.state.system?.name ?? 'proof';
      download(`${name}.proof.txt`, store.exportScript(), 'text/plain');
      break;
    }
    case 'export-json': {
      const name = store.state.system?.name ?? 'proof';
      download(`${name}.transcript.json`, store.exportTranscript(), 'application/json');
      break;
    }
    default:
      break;
  }
});

root.addEventListener('change', (event) => {
  const target = event.target as HTMLElement;
  const action = target.dataset.action;
  const row = Number(target.dataset.row ?? -1);
  if (action === 'set-tile' && target instanceof HTMLSelectElement) {
    store.setDraftTile(row, Number(target.value));
  } else if (action === 'set-class' && target instanceof HTMLSelectElement) {
    store.setDraftClass(row, target.value);
  } else if (action === 'set-weight' && target instanceof HTMLInputElement) {
    store.setDraftWeight(row, target.value);
  }
});

void store.loadCatalogue();
